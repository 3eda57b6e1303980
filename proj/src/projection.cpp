#include "polyvem/projection.hpp"
#include "polyvem/errors.hpp"

#include <cmath>
#include <map>

namespace polyvem {

Eigen::MatrixXd monomial_matrix_H(const Eigen::Vector3d& x, int dim,
                                  const Eigen::Vector3d& shift, double scale) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim * (dim + 1));
    for (int i = 0; i < dim; ++i) {
        h(i, i) = 1.0;
        for (int m = 0; m < dim; ++m)
            h(i, (m + 1) * dim + i) = (x(m) - shift(m)) / scale;
    }
    return h;
}

Eigen::MatrixXd projected_gradient(const Mesh& mesh, const PolytopalElement& elem,
                                   double measure) {
    const int d = mesh.dimension;
    const int n = static_cast<int>(elem.node_ids.size());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d * d, d * n);

    if (measure <= 0.0)
        throw DegenerateElement("projected gradient needs a positive measure");

    if (d == 2) {
        // exact edge integration of the linear edge ansatz:
        // contribution (L/2)(u_I + u_J) tensor N / Omega per edge
        for (int i = 0; i < n; ++i) {
            const int j = (i + 1) % n;
            const Eigen::Vector2d a = mesh.node_x(elem.node_ids[static_cast<std::size_t>(i)]).head<2>();
            const Eigen::Vector2d b = mesh.node_x(elem.node_ids[static_cast<std::size_t>(j)]).head<2>();
            const Eigen::Vector2d e = b - a;
            const Eigen::Vector2d ln(e.y(), -e.x()); // outward normal times edge length
            for (int comp = 0; comp < 2; ++comp)
                for (int dir = 0; dir < 2; ++dir) {
                    g(comp + dir * 2, i * 2 + comp) += 0.5 * ln(dir) / measure;
                    g(comp + dir * 2, j * 2 + comp) += 0.5 * ln(dir) / measure;
                }
        }
    } else {
        // one-point rule at (xi, eta) = (1/3, 1/3) with weight 1/2 per face
        // triangle; w * N_zeta * N equals half the area normal, so no
        // normalization is needed and degenerate triangles drop out
        std::map<int, int> local;
        for (int i = 0; i < n; ++i)
            local[elem.node_ids[static_cast<std::size_t>(i)]] = i;
        for (const auto& tri : triangulate_faces(mesh, elem)) {
            const Eigen::Vector3d gz = 0.5 * geometry::triangle_area_normal(tri);
            for (int corner = 0; corner < 3; ++corner) {
                const int loc = local.at(tri.node_ids[static_cast<std::size_t>(corner)]);
                for (int comp = 0; comp < 3; ++comp)
                    for (int dir = 0; dir < 3; ++dir)
                        g(comp + dir * 3, loc * 3 + comp) += gz(dir) / (3.0 * measure);
            }
        }
    }
    return g;
}

ProjectionOperator assemble_pi_nabla(const Mesh& mesh, const PolytopalElement& elem,
                                     bool scaled_monomials) {
    ProjectionOperator op;
    op.dim = mesh.dimension;
    op.n_nodes = static_cast<int>(elem.node_ids.size());
    element_measure_centroid(mesh, elem, op.measure, op.centroid);
    if (scaled_monomials) {
        op.shift = op.centroid;
        double h = 0.0;
        for (int id : elem.node_ids)
            h = std::max(h, (mesh.node_x(id) - op.centroid).norm());
        op.scale = h > 0.0 ? h : 1.0;
    }

    const int d = op.dim;
    const int n = op.n_nodes;
    op.grad_map = projected_gradient(mesh, elem, op.measure);

    op.pi_nabla = Eigen::MatrixXd::Zero(d * (d + 1), d * n);
    // gradient rows: a[(1+j)d + i] = scale * du_i/dX_j
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            op.pi_nabla.row((1 + j) * d + i) = op.scale * op.grad_map.row(i + j * d);
    // constant rows from the node-averaging condition
    for (int i = 0; i < d; ++i) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(d * n);
        for (int I = 0; I < n; ++I) {
            row(I * d + i) += 1.0 / n;
            const Eigen::Vector3d x =
                mesh.node_x(elem.node_ids[static_cast<std::size_t>(I)]) - op.shift;
            for (int j = 0; j < d; ++j)
                row -= (x(j) / (n * op.scale)) * op.pi_nabla.row((1 + j) * d + i);
        }
        op.pi_nabla.row(i) = row;
    }
    return op;
}

} // namespace polyvem
