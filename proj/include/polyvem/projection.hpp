#pragma once

#include "polyvem/mesh.hpp"

#include <Eigen/Dense>

namespace polyvem {

/// Per-element linear map from stacked nodal displacements u_e (node-major,
/// u_e[I*d + i]) to the parameters a of the linear ansatz. Parameter
/// ordering is monomial-major and direction-interleaved,
///   a[m*d + i] = coefficient of monomial m for direction i,
/// with monomials {1, X, Y, Z} (optionally shifted/scaled). The constant
/// projected gradient is grad u (i,j) = a[(1+j)*d + i] / scale.
struct ProjectionOperator {
    int dim = 2;
    int n_nodes = 0;
    double measure = 0.0;
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    double scale = 1.0;                             ///< monomial scaling h_e
    Eigen::Vector3d shift = Eigen::Vector3d::Zero(); ///< monomial shift
    Eigen::MatrixXd grad_map; ///< d^2 x (d n), row i + j*d maps u_e to du_i/dX_j
    Eigen::MatrixXd pi_nabla; ///< d(d+1) x (d n)

    int n_params() const { return dim * (dim + 1); }
    int n_dofs() const { return dim * n_nodes; }
};

/// Matrix representation of the ansatz monomials at X: d x d(d+1), with
/// u_pi(X) = H(X) a. Monomials are (X - shift)/scale past the constant.
Eigen::MatrixXd monomial_matrix_H(const Eigen::Vector3d& x, int dim,
                                  const Eigen::Vector3d& shift = Eigen::Vector3d::Zero(),
                                  double scale = 1.0);

/// Gradient map from the boundary integral of u tensor N over the element
/// boundary: exact per-edge integration in 2D, one-point rule on face
/// triangles in 3D. Needs measure > 0.
Eigen::MatrixXd projected_gradient(const Mesh& mesh, const PolytopalElement& elem,
                                   double measure);

/// Full projection operator; `scaled_monomials` switches to the
/// centroid-shifted basis (X - X_c)/h_e.
ProjectionOperator assemble_pi_nabla(const Mesh& mesh, const PolytopalElement& elem,
                                     bool scaled_monomials = false);

} // namespace polyvem
