#pragma once

#include <Eigen/Dense>
#include <vector>

namespace polyvem::geometry {

/// Signed area of a 2D polygon loop (positive for counter-clockwise order).
double polygon_signed_area(const Eigen::Matrix<double, Eigen::Dynamic, 2>& loop);

/// Area and centroid of a simple, positively oriented 2D polygon.
/// Throws DegenerateElement if |area| < 1e-14 * bbox^2, OrientationError if
/// the signed area is negative.
void polygon_area_centroid(const Eigen::Matrix<double, Eigen::Dynamic, 2>& loop,
                           double& area, Eigen::Vector2d& centroid);

/// Exact monomial moments of a simple positively oriented polygon, boundary
/// formulas with x_0 = x_{n_V} wraparound:
///   m[0] = int 1, m[1] = int X, m[2] = int Y,
///   m[3] = int X^2, m[4] = int Y^2, m[5] = int XY.
std::array<double, 6> polygon_moments(const Eigen::Matrix<double, Eigen::Dynamic, 2>& loop);

/// True if the loop is simple (no two non-adjacent edges intersect).
bool polygon_is_simple(const Eigen::Matrix<double, Eigen::Dynamic, 2>& loop);

/// Triangle on the reference surface of a 3D element, with the linear ansatz
/// {xi, eta, 1 - xi - eta} over nodes (v0, v1, v2).
struct SurfaceTriangle {
    Eigen::Vector3d v0, v1, v2;
    int face = -1;          ///< parent face index within the element
    std::array<int, 3> node_ids{-1, -1, -1}; ///< global node ids
    bool degenerate = false; ///< collinear nodes; contributes zero to boundary integrals
};

/// Area-weighted normal g_zeta = g_xi x g_eta of a surface triangle
/// (constant over the triangle). |g_zeta| = N_zeta, g_zeta / N_zeta = N.
Eigen::Vector3d triangle_area_normal(const SurfaceTriangle& tri);

/// Unit normal and area Jacobian of a surface triangle. Throws
/// DegenerateTriangle when N_zeta falls below tol.
void face_geometry(const SurfaceTriangle& tri, Eigen::Vector3d& normal, double& n_zeta,
                   double tol = 1e-300);

/// Simplex of a stabilization submesh: triangle (2D) or tetrahedron (3D),
/// referencing element-local node indices.
struct Simplex {
    std::array<int, 4> nodes{-1, -1, -1, -1}; ///< local indices, nodes[3] unused in 2D
    double measure = 0.0;
};

/// Fan triangulation of a polygon loop (indices into the loop), used when the
/// polygon is convex up to collinear vertices. Returns triangles with signed
/// areas; caller filters/validates.
std::vector<std::array<int, 3>> fan_triangulation(int n_vertices);

/// Ear-clipping triangulation of a simple polygon; handles non-convex loops
/// and collinear (hanging) vertices. Throws SubdivisionFailed if no ear is
/// found.
std::vector<std::array<int, 3>> ear_clip(const Eigen::Matrix<double, Eigen::Dynamic, 2>& loop);

/// Volume of the tetrahedron (apex, a, b, c), positive when (a, b, c) is seen
/// counter-clockwise from outside and the apex lies on the inner side.
double tet_volume(const Eigen::Vector3d& apex, const Eigen::Vector3d& a,
                  const Eigen::Vector3d& b, const Eigen::Vector3d& c);

/// Exact integrals of {1, x, y} and second-order monomials over a triangle.
/// q is the (d+1)x(d+1) symmetric matrix of int mono_m * mono_n.
Eigen::Matrix3d triangle_monomial_matrix(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                         const Eigen::Vector2d& c);

/// Same for a tetrahedron with monomials {1, x, y, z}.
Eigen::Matrix4d tet_monomial_matrix(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                    const Eigen::Vector3d& c, const Eigen::Vector3d& d);

} // namespace polyvem::geometry
