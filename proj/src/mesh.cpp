#include "polyvem/mesh.hpp"
#include "polyvem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace polyvem {

namespace {

Eigen::Matrix<double, Eigen::Dynamic, 2> loop_coords_2d(const Mesh& mesh,
                                                        const std::vector<int>& ids) {
    Eigen::Matrix<double, Eigen::Dynamic, 2> loop(ids.size(), 2);
    for (std::size_t i = 0; i < ids.size(); ++i)
        loop.row(static_cast<Eigen::Index>(i)) = mesh.node_x(ids[i]).head<2>();
    return loop;
}

std::vector<int> sorted_key(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

double Mesh::bbox_diagonal() const {
    if (nodes.empty())
        return 0.0;
    Eigen::Vector3d lo = nodes.front().x, hi = nodes.front().x;
    for (const auto& n : nodes) {
        lo = lo.cwiseMin(n.x);
        hi = hi.cwiseMax(n.x);
    }
    return (hi - lo).norm();
}

void Mesh::validate() const {
    if (dimension != 2 && dimension != 3)
        throw ValidationError("mesh dimension must be 2 or 3");
    const int nn = n_nodes();
    for (int i = 0; i < nn; ++i) {
        if (!nodes[static_cast<std::size_t>(i)].x.allFinite())
            throw ValidationError("node " + std::to_string(i) + " has non-finite coordinates");
    }

    // duplicate nodes within 1e-12 * bbox diagonal
    const double tol = 1e-12 * bbox_diagonal();
    if (tol > 0.0) {
        std::map<std::array<long long, 3>, std::vector<int>> grid;
        auto key_of = [&](const Eigen::Vector3d& x) {
            return std::array<long long, 3>{static_cast<long long>(std::floor(x.x() / tol)),
                                            static_cast<long long>(std::floor(x.y() / tol)),
                                            static_cast<long long>(std::floor(x.z() / tol))};
        };
        for (int i = 0; i < nn; ++i) {
            const Eigen::Vector3d x = nodes[static_cast<std::size_t>(i)].x;
            const auto k = key_of(x);
            for (long long dx = -1; dx <= 1; ++dx)
                for (long long dy = -1; dy <= 1; ++dy)
                    for (long long dz = -1; dz <= 1; ++dz) {
                        auto it = grid.find({k[0] + dx, k[1] + dy, k[2] + dz});
                        if (it == grid.end())
                            continue;
                        for (int j : it->second)
                            if ((nodes[static_cast<std::size_t>(j)].x - x).norm() < tol)
                                throw ValidationError("duplicate nodes " + std::to_string(j) +
                                                      " and " + std::to_string(i));
                    }
            grid[k].push_back(i);
        }
    }

    for (std::size_t e = 0; e < elements.size(); ++e) {
        const auto& el = elements[e];
        for (int id : el.node_ids)
            if (id < 0 || id >= nn)
                throw ValidationError("element " + std::to_string(e) + " references node " +
                                      std::to_string(id));
        if (dimension == 2) {
            if (el.node_ids.size() < 3)
                throw ValidationError("element " + std::to_string(e) + " has fewer than 3 nodes");
            const auto loop = loop_coords_2d(*this, el.node_ids);
            if (!geometry::polygon_is_simple(loop))
                throw ValidationError("element " + std::to_string(e) + " loop self-intersects");
            double area;
            Eigen::Vector2d c;
            geometry::polygon_area_centroid(loop, area, c); // throws on orientation/degeneracy
        } else {
            if (el.faces.empty())
                throw ValidationError("3D element " + std::to_string(e) + " has no faces");
            for (const auto& f : el.faces) {
                if (f.size() < 3)
                    throw FaceTooSmall("element " + std::to_string(e) + " face with " +
                                       std::to_string(f.size()) + " nodes");
                for (int id : f)
                    if (id < 0 || id >= nn)
                        throw ValidationError("element " + std::to_string(e) +
                                              " face references node " + std::to_string(id));
            }
            // closed orientable surface: every directed edge paired with its reverse
            std::map<std::pair<int, int>, int> edge_count;
            for (const auto& f : el.faces)
                for (std::size_t i = 0; i < f.size(); ++i) {
                    const int a = f[i], b = f[(i + 1) % f.size()];
                    edge_count[{a, b}]++;
                }
            for (const auto& [edge, cnt] : edge_count) {
                auto rev = edge_count.find({edge.second, edge.first});
                if (cnt != 1 || rev == edge_count.end() || rev->second != 1)
                    throw NonClosedSurface("element " + std::to_string(e) + " edge " +
                                           std::to_string(edge.first) + "-" +
                                           std::to_string(edge.second) + " not paired");
            }
            double vol;
            Eigen::Vector3d c;
            element_measure_centroid(*this, el, vol, c); // throws if volume <= tol
        }
    }

    for (const auto& [name, set] : boundary_sets) {
        for (int id : set.nodes)
            if (id < 0 || id >= nn)
                throw ValidationError("boundary set '" + name + "' references node " +
                                      std::to_string(id));
        for (const auto& f : set.facets)
            for (int id : f)
                if (id < 0 || id >= nn)
                    throw ValidationError("boundary set '" + name + "' facet references node " +
                                          std::to_string(id));
    }
}

std::vector<std::pair<int, std::vector<int>>> Mesh::boundary_facets() const {
    std::vector<std::pair<int, std::vector<int>>> result;
    if (dimension == 2) {
        std::map<std::pair<int, int>, int> count;
        for (const auto& el : elements)
            for (std::size_t i = 0; i < el.node_ids.size(); ++i) {
                const int a = el.node_ids[i], b = el.node_ids[(i + 1) % el.node_ids.size()];
                count[{std::min(a, b), std::max(a, b)}]++;
            }
        for (std::size_t e = 0; e < elements.size(); ++e) {
            const auto& el = elements[e];
            for (std::size_t i = 0; i < el.node_ids.size(); ++i) {
                const int a = el.node_ids[i], b = el.node_ids[(i + 1) % el.node_ids.size()];
                if (count[{std::min(a, b), std::max(a, b)}] == 1)
                    result.push_back({static_cast<int>(e), {a, b}});
            }
        }
    } else {
        std::map<std::vector<int>, int> count;
        for (const auto& el : elements)
            for (const auto& f : el.faces)
                count[sorted_key(f)]++;
        for (std::size_t e = 0; e < elements.size(); ++e)
            for (const auto& f : elements[e].faces)
                if (count[sorted_key(f)] == 1)
                    result.push_back({static_cast<int>(e), f});
    }
    return result;
}

std::vector<int> Mesh::boundary_nodes() const {
    std::set<int> ids;
    for (const auto& [e, facet] : boundary_facets())
        ids.insert(facet.begin(), facet.end());
    return {ids.begin(), ids.end()};
}

Eigen::MatrixXd element_coords(const Mesh& mesh, const PolytopalElement& elem) {
    const int d = mesh.dimension;
    Eigen::MatrixXd coords(elem.node_ids.size(), d);
    for (std::size_t i = 0; i < elem.node_ids.size(); ++i)
        coords.row(static_cast<Eigen::Index>(i)) = mesh.node_x(elem.node_ids[i]).head(d);
    return coords;
}

std::vector<geometry::SurfaceTriangle> triangulate_faces(const Mesh& mesh,
                                                         const PolytopalElement& elem) {
    std::vector<geometry::SurfaceTriangle> tris;
    for (std::size_t f = 0; f < elem.faces.size(); ++f) {
        const auto& face = elem.faces[f];
        if (face.size() < 3)
            throw FaceTooSmall("face " + std::to_string(f) + " has " +
                               std::to_string(face.size()) + " nodes");
        double scale = 0.0;
        for (std::size_t k = 1; k < face.size(); ++k)
            scale = std::max(scale, (mesh.node_x(face[k]) - mesh.node_x(face[0])).squaredNorm());
        for (const auto& t : geometry::fan_triangulation(static_cast<int>(face.size()))) {
            geometry::SurfaceTriangle tri;
            tri.face = static_cast<int>(f);
            tri.node_ids = {face[static_cast<std::size_t>(t[0])],
                            face[static_cast<std::size_t>(t[1])],
                            face[static_cast<std::size_t>(t[2])]};
            tri.v0 = mesh.node_x(tri.node_ids[0]);
            tri.v1 = mesh.node_x(tri.node_ids[1]);
            tri.v2 = mesh.node_x(tri.node_ids[2]);
            tri.degenerate = geometry::triangle_area_normal(tri).norm() <= 1e-14 * scale;
            tris.push_back(tri);
        }
    }
    return tris;
}

void element_measure_centroid(const Mesh& mesh, const PolytopalElement& elem,
                              double& measure, Eigen::Vector3d& centroid) {
    if (mesh.dimension == 2) {
        double area;
        Eigen::Vector2d c;
        geometry::polygon_area_centroid(loop_coords_2d(mesh, elem.node_ids), area, c);
        measure = area;
        centroid = Eigen::Vector3d(c.x(), c.y(), 0.0);
        return;
    }
    // divergence theorem over the triangulated boundary, exact for planar
    // face triangles
    double vol = 0.0;
    Eigen::Vector3d first = Eigen::Vector3d::Zero();
    double scale = 0.0;
    for (const auto& tri : triangulate_faces(mesh, elem)) {
        const double v = tri.v0.dot(tri.v1.cross(tri.v2)) / 6.0;
        vol += v;
        first += v * (tri.v0 + tri.v1 + tri.v2) / 4.0; // tet from origin
        scale = std::max({scale, tri.v0.norm(), tri.v1.norm(), tri.v2.norm()});
    }
    const double tol = 1e-14 * scale * scale * scale;
    if (vol <= tol)
        throw DegenerateElement("polyhedron volume " + std::to_string(vol) + " below tolerance");
    measure = vol;
    centroid = first / vol;
}

std::vector<geometry::Simplex> subdivide_element(const Mesh& mesh, const PolytopalElement& elem) {
    double elem_measure;
    Eigen::Vector3d c;
    element_measure_centroid(mesh, elem, elem_measure, c);
    const double tol = 1e-14 * elem_measure;

    std::vector<geometry::Simplex> out;
    if (mesh.dimension == 2) {
        const auto loop = loop_coords_2d(mesh, elem.node_ids);
        auto tri_area = [&](const std::array<int, 3>& t) {
            const Eigen::Vector2d a = loop.row(t[0]), b = loop.row(t[1]), cc = loop.row(t[2]);
            return 0.5 * ((b - a).x() * (cc - a).y() - (b - a).y() * (cc - a).x());
        };
        auto tris = geometry::fan_triangulation(static_cast<int>(loop.rows()));
        bool fan_ok = true;
        for (const auto& t : tris)
            if (tri_area(t) < -tol) {
                fan_ok = false;
                break;
            }
        if (!fan_ok)
            tris = geometry::ear_clip(loop);
        for (const auto& t : tris) {
            const double a = tri_area(t);
            if (a < tol)
                continue;
            geometry::Simplex s;
            s.nodes = {t[0], t[1], t[2], -1};
            s.measure = a;
            out.push_back(s);
        }
    } else {
        // apex rule: tetrahedra between the lowest-id vertex and all face
        // triangles that do not contain it
        std::size_t apex_local = 0;
        for (std::size_t i = 1; i < elem.node_ids.size(); ++i)
            if (elem.node_ids[i] < elem.node_ids[apex_local])
                apex_local = i;
        const int apex_id = elem.node_ids[apex_local];
        const Eigen::Vector3d apex = mesh.node_x(apex_id);

        std::map<int, int> global_to_local;
        for (std::size_t i = 0; i < elem.node_ids.size(); ++i)
            global_to_local[elem.node_ids[i]] = static_cast<int>(i);

        for (const auto& tri : triangulate_faces(mesh, elem)) {
            if (tri.degenerate)
                continue;
            if (tri.node_ids[0] == apex_id || tri.node_ids[1] == apex_id ||
                tri.node_ids[2] == apex_id)
                continue;
            const double v = geometry::tet_volume(apex, tri.v0, tri.v1, tri.v2);
            if (v < -tol)
                throw SubdivisionFailed("element not star-shaped from vertex " +
                                        std::to_string(apex_id));
            if (v < tol)
                continue;
            geometry::Simplex s;
            s.nodes = {static_cast<int>(apex_local), global_to_local.at(tri.node_ids[0]),
                       global_to_local.at(tri.node_ids[1]), global_to_local.at(tri.node_ids[2])};
            s.measure = v;
            out.push_back(s);
        }
    }

    double sum = 0.0;
    for (const auto& s : out)
        sum += s.measure;
    if (std::abs(sum - elem_measure) > 1e-10 * elem_measure)
        throw SubdivisionFailed("submesh measures sum to " + std::to_string(sum) +
                                ", element measure is " + std::to_string(elem_measure));
    return out;
}

} // namespace polyvem
