#include "polyvem/geometry.hpp"
#include "polyvem/errors.hpp"

#include <algorithm>
#include <cmath>

namespace polyvem::geometry {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() * b.y() - a.y() * b.x();
}

// Proper segment intersection test (shared endpoints excluded by the caller).
bool segments_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                        const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
    const double d1 = cross2(q2 - q1, p1 - q1);
    const double d2 = cross2(q2 - q1, p2 - q1);
    const double d3 = cross2(p2 - p1, q1 - p1);
    const double d4 = cross2(p2 - p1, q2 - p1);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

} // namespace

double polygon_signed_area(const Eigen::Matrix<double, Eigen::Dynamic, 2>& loop) {
    const Eigen::Index n = loop.rows();
    double a = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index j = (i + 1) % n;
        a += loop(i, 0) * loop(j, 1) - loop(j, 0) * loop(i, 1);
    }
    return 0.5 * a;
}

std::array<double, 6> polygon_moments(const Eigen::Matrix<double, Eigen::Dynamic, 2>& loop) {
    const Eigen::Index n = loop.rows();
    std::array<double, 6> m{};
    // wraparound convention: index 0 refers to the last vertex
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index ip = (i + n - 1) % n;
        const double xi = loop(i, 0), yi = loop(i, 1);
        const double xp = loop(ip, 0), yp = loop(ip, 1);
        const double w = yi * xp - yp * xi;
        m[0] += 0.5 * w;
        m[1] += w * (xi + xp) / 6.0;
        m[2] += w * (yi + yp) / 6.0;
        m[3] += w * ((xi + xp) * (xi + xp) - xi * xp) / 12.0;
        m[4] += w * ((yi + yp) * (yi + yp) - yi * yp) / 12.0;
        m[5] += w * (2.0 * xp * yp + xp * yi + xi * yp + 2.0 * xi * yi) / 24.0;
    }
    return m;
}

void polygon_area_centroid(const Eigen::Matrix<double, Eigen::Dynamic, 2>& loop,
                           double& area, Eigen::Vector2d& centroid) {
    if (loop.rows() < 3)
        throw DegenerateElement("polygon with fewer than 3 vertices");
    const Eigen::Vector2d lo = loop.colwise().minCoeff();
    const Eigen::Vector2d hi = loop.colwise().maxCoeff();
    const double bbox2 = (hi - lo).squaredNorm();
    const auto m = polygon_moments(loop);
    if (std::abs(m[0]) < 1e-14 * bbox2)
        throw DegenerateElement("polygon area below tolerance");
    if (m[0] < 0.0)
        throw OrientationError("polygon loop is clockwise");
    area = m[0];
    centroid = Eigen::Vector2d(m[1] / m[0], m[2] / m[0]);
}

bool polygon_is_simple(const Eigen::Matrix<double, Eigen::Dynamic, 2>& loop) {
    const Eigen::Index n = loop.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index i2 = (i + 1) % n;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Eigen::Index j2 = (j + 1) % n;
            if (i == j || i2 == j || i == j2)
                continue; // adjacent edges share a vertex
            if (segments_intersect(loop.row(i), loop.row(i2), loop.row(j), loop.row(j2)))
                return false;
        }
    }
    return true;
}

Eigen::Vector3d triangle_area_normal(const SurfaceTriangle& tri) {
    // linear ansatz {xi, eta, 1-xi-eta}: g_xi = v0 - v2, g_eta = v1 - v2
    const Eigen::Vector3d g_xi = tri.v0 - tri.v2;
    const Eigen::Vector3d g_eta = tri.v1 - tri.v2;
    return g_xi.cross(g_eta);
}

void face_geometry(const SurfaceTriangle& tri, Eigen::Vector3d& normal, double& n_zeta,
                   double tol) {
    const Eigen::Vector3d g_zeta = triangle_area_normal(tri);
    n_zeta = g_zeta.norm();
    if (n_zeta <= tol)
        throw DegenerateTriangle("zero area Jacobian");
    normal = g_zeta / n_zeta;
}

std::vector<std::array<int, 3>> fan_triangulation(int n_vertices) {
    std::vector<std::array<int, 3>> tris;
    tris.reserve(std::max(0, n_vertices - 2));
    for (int k = 1; k + 1 < n_vertices; ++k)
        tris.push_back({0, k, k + 1});
    return tris;
}

std::vector<std::array<int, 3>> ear_clip(const Eigen::Matrix<double, Eigen::Dynamic, 2>& loop) {
    const int n = static_cast<int>(loop.rows());
    if (n < 3)
        throw FaceTooSmall("cannot triangulate a loop with fewer than 3 vertices");
    const double area = polygon_signed_area(loop);
    const double eps = 1e-14 * std::abs(area);

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i)
        idx[i] = i;
    std::vector<std::array<int, 3>> tris;

    auto tri_cross = [&](int a, int b, int c) {
        const Eigen::Vector2d pa = loop.row(a), pb = loop.row(b), pc = loop.row(c);
        return cross2(pb - pa, pc - pa);
    };
    auto strictly_inside = [&](int p, int a, int b, int c) {
        const Eigen::Vector2d pp = loop.row(p), pa = loop.row(a), pb = loop.row(b),
                              pc = loop.row(c);
        const double s1 = cross2(pb - pa, pp - pa);
        const double s2 = cross2(pc - pb, pp - pb);
        const double s3 = cross2(pa - pc, pp - pc);
        return s1 > eps && s2 > eps && s3 > eps;
    };

    while (idx.size() > 3) {
        bool clipped = false;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const int prev = idx[(k + idx.size() - 1) % idx.size()];
            const int cur = idx[k];
            const int next = idx[(k + 1) % idx.size()];
            if (tri_cross(prev, cur, next) < -eps)
                continue; // reflex vertex
            bool blocked = false;
            for (int other : idx) {
                if (other == prev || other == cur || other == next)
                    continue;
                if (strictly_inside(other, prev, cur, next)) {
                    blocked = true;
                    break;
                }
            }
            if (blocked)
                continue;
            tris.push_back({prev, cur, next});
            idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(k));
            clipped = true;
            break;
        }
        if (!clipped)
            throw SubdivisionFailed("ear clipping found no ear (non-simple polygon?)");
    }
    tris.push_back({idx[0], idx[1], idx[2]});
    return tris;
}

double tet_volume(const Eigen::Vector3d& apex, const Eigen::Vector3d& a,
                  const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
    return (b - a).cross(c - a).dot(a - apex) / 6.0;
}

Eigen::Matrix3d triangle_monomial_matrix(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                         const Eigen::Vector2d& c) {
    const double area = 0.5 * cross2(b - a, c - a);
    Eigen::Matrix<double, 2, 3> v;
    v.col(0) = a;
    v.col(1) = b;
    v.col(2) = c;
    const Eigen::Vector2d s = v.rowwise().sum();
    Eigen::Matrix3d q = Eigen::Matrix3d::Zero();
    q(0, 0) = area;
    for (int i = 0; i < 2; ++i) {
        q(0, i + 1) = q(i + 1, 0) = area * s(i) / 3.0;
        for (int j = 0; j < 2; ++j)
            q(i + 1, j + 1) = area / 12.0 * ((v.row(i) * v.row(j).transpose()).value() + s(i) * s(j));
    }
    return q;
}

Eigen::Matrix4d tet_monomial_matrix(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                    const Eigen::Vector3d& c, const Eigen::Vector3d& d) {
    const double vol = (b - a).cross(c - a).dot(d - a) / 6.0;
    Eigen::Matrix<double, 3, 4> v;
    v.col(0) = a;
    v.col(1) = b;
    v.col(2) = c;
    v.col(3) = d;
    const Eigen::Vector3d s = v.rowwise().sum();
    Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
    q(0, 0) = vol;
    for (int i = 0; i < 3; ++i) {
        q(0, i + 1) = q(i + 1, 0) = vol * s(i) / 4.0;
        for (int j = 0; j < 3; ++j)
            q(i + 1, j + 1) = vol / 20.0 * ((v.row(i) * v.row(j).transpose()).value() + s(i) * s(j));
    }
    return q;
}

} // namespace polyvem::geometry
