#include "polyvem/stabilization.hpp"
#include "polyvem/errors.hpp"

namespace polyvem {

ElementOperators build_element_operators(const Mesh& mesh, int elem_index,
                                         const NeoHookean& mat, const StabilizationConfig& cfg) {
    const auto& elem = mesh.elements[static_cast<std::size_t>(elem_index)];
    ElementOperators ops;
    ops.dim = mesh.dimension;
    ops.node_ids = elem.node_ids;
    ops.coords = element_coords(mesh, elem);
    ops.proj = assemble_pi_nabla(mesh, elem, cfg.scaled_monomials);
    ops.submesh = subdivide_element(mesh, elem);

    const int d = ops.dim;
    for (const auto& s : ops.submesh) {
        // P1 gradients: jacobian columns are edge vectors from node 0
        Eigen::MatrixXd j(d, d);
        const Eigen::VectorXd x0 = ops.coords.row(s.nodes[0]).transpose();
        for (int k = 0; k < d; ++k)
            j.col(k) = ops.coords.row(s.nodes[static_cast<std::size_t>(k + 1)]).transpose() - x0;
        const Eigen::MatrixXd jinv_t = j.inverse().transpose();
        Eigen::MatrixXd g(d, d + 1);
        g.col(0).setZero();
        for (int k = 0; k < d; ++k) {
            g.col(k + 1) = jinv_t.col(k);
            g.col(0) -= jinv_t.col(k);
        }
        ops.simplex_grads.push_back(std::move(g));
    }

    const Eigen::MatrixXd m_proj =
        element_mass(mesh, elem, ops.proj, mat.rho, cfg.mass_scheme, ops.submesh);
    if (cfg.beta_dyn == 0.0) {
        ops.mass = m_proj;
    } else {
        ops.mass = (1.0 - cfg.beta_dyn) * m_proj +
                   cfg.beta_dyn * stabilized_element_mass(mesh, elem, ops.submesh, mat.rho);
    }
    return ops;
}

void consistency_static(const ElementOperators& ops, const NeoHookean& mat,
                        const Eigen::VectorXd& u_e, double* energy, Eigen::VectorXd* residual,
                        Eigen::MatrixXd* tangent) {
    const int d = ops.dim;
    const Eigen::MatrixXd& g = ops.proj.grad_map; // d^2 x n_dofs
    const Eigen::VectorXd grad = g * u_e;

    Eigen::MatrixXd f = Eigen::MatrixXd::Identity(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            f(i, j) += grad(i + j * d);

    const PiolaResult pr = first_piola(mat, f, tangent != nullptr);
    const double vol = ops.measure();
    if (energy)
        *energy = vol * pr.energy;
    if (residual) {
        Eigen::VectorXd pvec(d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                pvec(i + j * d) = pr.P(i, j);
        *residual = vol * g.transpose() * pvec;
    }
    if (tangent)
        *tangent = vol * g.transpose() * pr.A * g;
}

void stabilization_static(const ElementOperators& ops, const NeoHookean& mat,
                          const Eigen::VectorXd& u_e, double* energy, Eigen::VectorXd* residual,
                          Eigen::MatrixXd* tangent) {
    const int d = ops.dim;
    const int ndof = ops.n_dofs();
    if (energy)
        *energy = 0.0;
    if (residual)
        residual->setZero(ndof);
    if (tangent)
        tangent->setZero(ndof, ndof);

    for (std::size_t t = 0; t < ops.submesh.size(); ++t) {
        const auto& s = ops.submesh[t];
        const Eigen::MatrixXd& gn = ops.simplex_grads[t]; // d x (d+1)

        Eigen::MatrixXd f = Eigen::MatrixXd::Identity(d, d);
        for (int a = 0; a <= d; ++a) {
            const int base = s.nodes[static_cast<std::size_t>(a)] * d;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    f(i, j) += u_e(base + i) * gn(j, a);
        }

        const PiolaResult pr = first_piola(mat, f, tangent != nullptr);
        if (energy)
            *energy += s.measure * pr.energy;
        if (residual) {
            for (int a = 0; a <= d; ++a) {
                const int base = s.nodes[static_cast<std::size_t>(a)] * d;
                for (int i = 0; i < d; ++i) {
                    double r = 0.0;
                    for (int j = 0; j < d; ++j)
                        r += pr.P(i, j) * gn(j, a);
                    (*residual)(base + i) += s.measure * r;
                }
            }
        }
        if (tangent) {
            for (int a = 0; a <= d; ++a)
                for (int b = 0; b <= d; ++b) {
                    const int ra = s.nodes[static_cast<std::size_t>(a)] * d;
                    const int rb = s.nodes[static_cast<std::size_t>(b)] * d;
                    for (int i = 0; i < d; ++i)
                        for (int k = 0; k < d; ++k) {
                            double v = 0.0;
                            for (int j = 0; j < d; ++j)
                                for (int l = 0; l < d; ++l)
                                    v += gn(j, a) * pr.A(i + j * d, k + l * d) * gn(l, b);
                            (*tangent)(ra + i, rb + k) += s.measure * v;
                        }
                }
        }
    }
}

void element_static(const ElementOperators& ops, const NeoHookean& mat, double beta_stat,
                    const Eigen::VectorXd& u_e, double* energy, Eigen::VectorXd* residual,
                    Eigen::MatrixXd* tangent) {
    double e_c = 0.0, e_s = 0.0;
    Eigen::VectorXd r_c, r_s;
    Eigen::MatrixXd k_c, k_s;

    consistency_static(ops, mat, u_e, energy ? &e_c : nullptr, residual ? &r_c : nullptr,
                       tangent ? &k_c : nullptr);
    if (beta_stat != 0.0) {
        stabilization_static(ops, mat, u_e, energy ? &e_s : nullptr, residual ? &r_s : nullptr,
                             tangent ? &k_s : nullptr);
    } else {
        if (residual)
            r_s.setZero(ops.n_dofs());
        if (tangent)
            k_s.setZero(ops.n_dofs(), ops.n_dofs());
    }

    const double wc = 1.0 - beta_stat, ws = beta_stat;
    if (energy)
        *energy = wc * e_c + ws * e_s;
    if (residual)
        *residual = wc * r_c + ws * r_s;
    if (tangent)
        *tangent = wc * k_c + ws * k_s;
}

} // namespace polyvem
