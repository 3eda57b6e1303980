#include "polyvem/mass.hpp"
#include "polyvem/errors.hpp"

namespace polyvem {

MassScheme mass_scheme_from_string(const std::string& name) {
    if (name == "centroid")
        return MassScheme::Centroid;
    if (name == "subtriangulation")
        return MassScheme::SubTriangulation;
    if (name == "exact")
        return MassScheme::BoundaryExact;
    throw ConfigError("unknown mass scheme '" + name + "'");
}

std::string to_string(MassScheme scheme) {
    switch (scheme) {
    case MassScheme::Centroid: return "centroid";
    case MassScheme::SubTriangulation: return "subtriangulation";
    case MassScheme::BoundaryExact: return "exact";
    }
    return "?";
}

namespace {

// Affine change of basis from global monomials {1, X, ...} to the
// projection basis {1, (X - shift)/scale, ...}: Q' = T Q T^T.
Eigen::MatrixXd basis_transform(const ProjectionOperator& proj) {
    const int d = proj.dim;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d + 1, d + 1);
    t(0, 0) = 1.0;
    for (int m = 0; m < d; ++m) {
        t(m + 1, 0) = -proj.shift(m) / proj.scale;
        t(m + 1, m + 1) = 1.0 / proj.scale;
    }
    return t;
}

Eigen::VectorXd monomials_at(const ProjectionOperator& proj, const Eigen::Vector3d& x) {
    Eigen::VectorXd q(proj.dim + 1);
    q(0) = 1.0;
    for (int m = 0; m < proj.dim; ++m)
        q(m + 1) = (x(m) - proj.shift(m)) / proj.scale;
    return q;
}

} // namespace

Eigen::MatrixXd monomial_moment_matrix(const Mesh& mesh, const PolytopalElement& elem,
                                       const ProjectionOperator& proj, MassScheme scheme,
                                       const std::vector<geometry::Simplex>& submesh) {
    const int d = proj.dim;

    if (scheme == MassScheme::Centroid) {
        const Eigen::VectorXd q = monomials_at(proj, proj.centroid);
        return proj.measure * q * q.transpose();
    }

    const Eigen::MatrixXd coords = element_coords(mesh, elem);

    if (scheme == MassScheme::SubTriangulation) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d + 1, d + 1);
        for (const auto& s : submesh) {
            Eigen::Vector3d c = Eigen::Vector3d::Zero();
            for (int k = 0; k <= d; ++k)
                c.head(d) += coords.row(s.nodes[static_cast<std::size_t>(k)]).transpose();
            c /= static_cast<double>(d + 1);
            const Eigen::VectorXd q = monomials_at(proj, c);
            m += s.measure * q * q.transpose();
        }
        return m;
    }

    // BoundaryExact
    Eigen::MatrixXd global = Eigen::MatrixXd::Zero(d + 1, d + 1);
    if (d == 2) {
        Eigen::Matrix<double, Eigen::Dynamic, 2> loop = coords;
        const auto mo = geometry::polygon_moments(loop);
        global << mo[0], mo[1], mo[2],
                  mo[1], mo[3], mo[5],
                  mo[2], mo[5], mo[4];
    } else {
        for (const auto& s : submesh)
            global += geometry::tet_monomial_matrix(
                coords.row(s.nodes[0]).transpose(), coords.row(s.nodes[1]).transpose(),
                coords.row(s.nodes[2]).transpose(), coords.row(s.nodes[3]).transpose());
    }
    const Eigen::MatrixXd t = basis_transform(proj);
    return t * global * t.transpose();
}

Eigen::MatrixXd hth_integral(const Mesh& mesh, const PolytopalElement& elem,
                             const ProjectionOperator& proj, MassScheme scheme,
                             const std::vector<geometry::Simplex>& submesh) {
    const int d = proj.dim;
    const Eigen::MatrixXd q = monomial_moment_matrix(mesh, elem, proj, scheme, submesh);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d * (d + 1), d * (d + 1));
    for (int m = 0; m <= d; ++m)
        for (int n = 0; n <= d; ++n)
            for (int i = 0; i < d; ++i)
                h(m * d + i, n * d + i) = q(m, n);
    return h;
}

Eigen::MatrixXd element_mass(const Mesh& mesh, const PolytopalElement& elem,
                             const ProjectionOperator& proj, double rho, MassScheme scheme,
                             const std::vector<geometry::Simplex>& submesh) {
    const Eigen::MatrixXd hth = hth_integral(mesh, elem, proj, scheme, submesh);
    Eigen::MatrixXd m = proj.pi_nabla.transpose() * (rho * hth) * proj.pi_nabla;
    return 0.5 * (m + m.transpose()); // symmetrize roundoff
}

Eigen::MatrixXd stabilized_element_mass(const Mesh& mesh, const PolytopalElement& elem,
                                        const std::vector<geometry::Simplex>& submesh,
                                        double rho) {
    const int d = mesh.dimension;
    const int n = static_cast<int>(elem.node_ids.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d * n, d * n);
    // centroid-rule value of the nodal field on each simplex is the plain
    // average of its corner values
    for (const auto& s : submesh) {
        const double w = rho * s.measure / ((d + 1.0) * (d + 1.0));
        for (int a = 0; a <= d; ++a)
            for (int b = 0; b <= d; ++b)
                for (int i = 0; i < d; ++i)
                    m(s.nodes[static_cast<std::size_t>(a)] * d + i,
                      s.nodes[static_cast<std::size_t>(b)] * d + i) += w;
    }
    return m;
}

} // namespace polyvem
