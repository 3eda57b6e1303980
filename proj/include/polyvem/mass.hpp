#pragma once

#include "polyvem/mesh.hpp"
#include "polyvem/projection.hpp"

#include <Eigen/Dense>

namespace polyvem {

/// How the monomial integral for the inertia term is evaluated:
///  - Centroid: one point at the element centroid (default)
///  - SubTriangulation: one point per submesh simplex
///  - BoundaryExact: exact; boundary moment formulas in 2D, closed-form
///    degree-2 simplex integrals over the submesh in 3D
enum class MassScheme { Centroid, SubTriangulation, BoundaryExact };

MassScheme mass_scheme_from_string(const std::string& name);
std::string to_string(MassScheme scheme);

/// Symmetric (d+1)x(d+1) matrix of int mono_m * mono_n over the element, in
/// the projection operator's monomial basis. The submesh is required for
/// SubTriangulation and for BoundaryExact in 3D.
Eigen::MatrixXd monomial_moment_matrix(const Mesh& mesh, const PolytopalElement& elem,
                                       const ProjectionOperator& proj, MassScheme scheme,
                                       const std::vector<geometry::Simplex>& submesh);

/// int H^T H dOmega expanded to d(d+1) x d(d+1).
Eigen::MatrixXd hth_integral(const Mesh& mesh, const PolytopalElement& elem,
                             const ProjectionOperator& proj, MassScheme scheme,
                             const std::vector<geometry::Simplex>& submesh);

/// Projection-only element mass M = Pi^T (rho int H^T H) Pi. Symmetric
/// positive semi-definite with rank at most d(d+1).
Eigen::MatrixXd element_mass(const Mesh& mesh, const PolytopalElement& elem,
                             const ProjectionOperator& proj, double rho, MassScheme scheme,
                             const std::vector<geometry::Simplex>& submesh);

/// Stabilization-part mass from nodal fields on the submesh, one point per
/// simplex at its centroid.
Eigen::MatrixXd stabilized_element_mass(const Mesh& mesh, const PolytopalElement& elem,
                                        const std::vector<geometry::Simplex>& submesh,
                                        double rho);

} // namespace polyvem
