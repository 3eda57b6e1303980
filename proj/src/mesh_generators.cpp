#include "polyvem/mesh_generators.hpp"
#include "polyvem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace polyvem {

namespace {

// Deduplicating node factory keyed on integer lattice coordinates.
class LatticeNodes {
public:
    explicit LatticeNodes(Mesh& mesh) : mesh_(mesh) {}

    int get(const std::array<long long, 3>& key, const Eigen::Vector3d& x) {
        auto it = ids_.find(key);
        if (it != ids_.end())
            return it->second;
        const int id = mesh_.n_nodes();
        mesh_.nodes.push_back({id, x});
        ids_[key] = id;
        return id;
    }

private:
    Mesh& mesh_;
    std::map<std::array<long long, 3>, int> ids_;
};

void attach_box_sets(Mesh& mesh, const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
    const int d = mesh.dimension;
    const double tol = 1e-9 * std::max(1.0, (hi - lo).head(d).norm());
    const char* names[6] = {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"};
    auto on_plane = [&](const Eigen::Vector3d& x, int set) {
        const int axis = set / 2;
        const double plane = (set % 2 == 0) ? lo(axis) : hi(axis);
        return std::abs(x(axis) - plane) < tol;
    };

    BoundarySet all;
    for (const auto& n : mesh.nodes)
        all.nodes.push_back(n.id);
    mesh.boundary_sets["all"] = all;

    for (int s = 0; s < 2 * d; ++s) {
        BoundarySet set;
        for (const auto& n : mesh.nodes)
            if (on_plane(n.x, s))
                set.nodes.push_back(n.id);
        for (const auto& [e, facet] : mesh.boundary_facets()) {
            bool on = true;
            for (int id : facet)
                on = on && on_plane(mesh.node_x(id), s);
            if (on)
                set.facets.push_back(facet);
        }
        mesh.boundary_sets[names[s]] = set;
    }
}

// Rotate a face loop so the smallest node id comes first (orientation kept).
std::vector<int> rotate_to_min(std::vector<int> loop) {
    auto it = std::min_element(loop.begin(), loop.end());
    std::rotate(loop.begin(), it, loop.end());
    return loop;
}

// Flip the face loop if its normal points toward the cell center.
std::vector<int> orient_outward(const Mesh& mesh, std::vector<int> loop,
                                const Eigen::Vector3d& cell_center) {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (int id : loop)
        c += mesh.node_x(id);
    c /= static_cast<double>(loop.size());
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Eigen::Vector3d a = mesh.node_x(loop[i]) - c;
        const Eigen::Vector3d b = mesh.node_x(loop[(i + 1) % loop.size()]) - c;
        n += a.cross(b);
    }
    if (n.dot(c - cell_center) < 0.0)
        std::reverse(loop.begin(), loop.end());
    return rotate_to_min(loop);
}

} // namespace

Mesh generate_structured(StructuredKind kind, const std::array<int, 3>& divisions,
                         const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
    const bool is3d = (kind == StructuredKind::H2S || kind == StructuredKind::H1Polyhedron);
    const bool serendipity = (kind == StructuredKind::Q2S || kind == StructuredKind::H2S);
    const int d = is3d ? 3 : 2;
    for (int a = 0; a < d; ++a)
        if (divisions[static_cast<std::size_t>(a)] < 1)
            throw ConfigError("structured mesh needs at least 1 division per axis");

    Mesh mesh;
    mesh.dimension = d;
    LatticeNodes factory(mesh);

    // refined lattice: even indices are cell corners, odd indices midpoints
    auto coord = [&](int axis, long long k) {
        const int div = divisions[static_cast<std::size_t>(axis)];
        return lo(axis) + (hi(axis) - lo(axis)) * static_cast<double>(k) / (2.0 * div);
    };
    auto node_at = [&](long long i, long long j, long long k) {
        Eigen::Vector3d x(coord(0, i), coord(1, j), is3d ? coord(2, k) : 0.0);
        return factory.get({i, j, k}, x);
    };

    const int nx = divisions[0], ny = divisions[1], nz = is3d ? divisions[2] : 1;
    for (int cz = 0; cz < nz; ++cz)
        for (int cy = 0; cy < ny; ++cy)
            for (int cx = 0; cx < nx; ++cx) {
                const long long i0 = 2LL * cx, j0 = 2LL * cy, k0 = 2LL * cz;
                PolytopalElement el;
                if (!is3d) {
                    if (serendipity) {
                        el.node_ids = {node_at(i0, j0, 0),     node_at(i0 + 1, j0, 0),
                                       node_at(i0 + 2, j0, 0), node_at(i0 + 2, j0 + 1, 0),
                                       node_at(i0 + 2, j0 + 2, 0), node_at(i0 + 1, j0 + 2, 0),
                                       node_at(i0, j0 + 2, 0), node_at(i0, j0 + 1, 0)};
                    } else {
                        el.node_ids = {node_at(i0, j0, 0), node_at(i0 + 2, j0, 0),
                                       node_at(i0 + 2, j0 + 2, 0), node_at(i0, j0 + 2, 0)};
                    }
                } else {
                    // collect cell nodes: corners plus (for H2S) edge midpoints,
                    // i.e. lattice points with at most one odd offset
                    for (long long dk = 0; dk <= 2; ++dk)
                        for (long long dj = 0; dj <= 2; ++dj)
                            for (long long di = 0; di <= 2; ++di) {
                                const int odd = (di % 2) + (dj % 2) + (dk % 2);
                                if (serendipity ? odd > 1 : odd > 0)
                                    continue;
                                el.node_ids.push_back(node_at(i0 + di, j0 + dj, k0 + dk));
                            }
                    // six faces as loops on the refined lattice
                    auto face_loop = [&](int axis, long long off) {
                        // walk the perimeter of the face in lattice steps of 1
                        static const std::array<std::pair<int, int>, 8> ring = {
                            {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};
                        std::vector<int> loop;
                        for (const auto& [u, v] : ring) {
                            if (serendipity || (u % 2 == 0 && v % 2 == 0)) {
                                long long ijk[3];
                                ijk[axis] = off;
                                ijk[(axis + 1) % 3] = (axis == 0 ? j0 : (axis == 1 ? k0 : i0)) + u;
                                ijk[(axis + 2) % 3] = (axis == 0 ? k0 : (axis == 1 ? i0 : j0)) + v;
                                loop.push_back(node_at(ijk[0], ijk[1], ijk[2]));
                            }
                        }
                        return loop;
                    };
                    Eigen::Vector3d center(coord(0, i0 + 1), coord(1, j0 + 1), coord(2, k0 + 1));
                    for (int axis = 0; axis < 3; ++axis) {
                        const long long offs[2] = {axis == 0 ? i0 : (axis == 1 ? j0 : k0),
                                                   (axis == 0 ? i0 : (axis == 1 ? j0 : k0)) + 2};
                        for (long long off : offs)
                            el.faces.push_back(orient_outward(mesh, face_loop(axis, off), center));
                    }
                }
                mesh.elements.push_back(std::move(el));
            }

    attach_box_sets(mesh, lo, hi);
    return mesh;
}

std::vector<Eigen::Vector2d> jittered_seeds(int nx, int ny, const Eigen::Vector2d& lo,
                                            const Eigen::Vector2d& hi, unsigned rng_seed,
                                            double jitter) {
    std::mt19937 rng(rng_seed);
    std::uniform_real_distribution<double> uni(-jitter, jitter);
    std::vector<Eigen::Vector2d> seeds;
    const double hx = (hi.x() - lo.x()) / nx, hy = (hi.y() - lo.y()) / ny;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            seeds.emplace_back(lo.x() + hx * (i + 0.5 + uni(rng)),
                               lo.y() + hy * (j + 0.5 + uni(rng)));
    return seeds;
}

Mesh generate_voronoi_2d(const std::vector<Eigen::Vector2d>& seeds, const Eigen::Vector2d& lo,
                         const Eigen::Vector2d& hi) {
    if (seeds.empty())
        throw ConfigError("voronoi mesh needs at least one seed");
    const double diag = (hi - lo).norm();
    for (std::size_t i = 0; i < seeds.size(); ++i)
        for (std::size_t j = i + 1; j < seeds.size(); ++j)
            if ((seeds[i] - seeds[j]).norm() < 1e-12 * diag)
                throw DuplicateSeeds("seeds " + std::to_string(i) + " and " + std::to_string(j));

    Mesh mesh;
    mesh.dimension = 2;
    const double tol = 1e-12 * diag;

    std::map<std::array<long long, 3>, int> grid;
    auto node_id = [&](const Eigen::Vector2d& p) {
        const std::array<long long, 3> k{static_cast<long long>(std::floor(p.x() / tol)),
                                         static_cast<long long>(std::floor(p.y() / tol)), 0};
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = grid.find({k[0] + dx, k[1] + dy, 0});
                if (it != grid.end() &&
                    (mesh.node_x(it->second).head<2>() - p).norm() < tol)
                    return it->second;
            }
        const int id = mesh.n_nodes();
        mesh.nodes.push_back({id, Eigen::Vector3d(p.x(), p.y(), 0.0)});
        grid[k] = id;
        return id;
    };

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        // start from the box, clip by the bisector half-plane of every other seed
        std::vector<Eigen::Vector2d> cell = {{lo.x(), lo.y()},
                                             {hi.x(), lo.y()},
                                             {hi.x(), hi.y()},
                                             {lo.x(), hi.y()}};
        for (std::size_t j = 0; j < seeds.size() && !cell.empty(); ++j) {
            if (j == i)
                continue;
            const Eigen::Vector2d dvec = seeds[j] - seeds[i];
            const Eigen::Vector2d mid = 0.5 * (seeds[i] + seeds[j]);
            auto side = [&](const Eigen::Vector2d& p) { return (p - mid).dot(dvec); };
            std::vector<Eigen::Vector2d> clipped;
            for (std::size_t k = 0; k < cell.size(); ++k) {
                const Eigen::Vector2d a = cell[k], b = cell[(k + 1) % cell.size()];
                const double sa = side(a), sb = side(b);
                if (sa <= 0.0)
                    clipped.push_back(a);
                if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0))
                    clipped.push_back(a + (b - a) * (sa / (sa - sb)));
            }
            cell = std::move(clipped);
        }
        if (cell.size() < 3)
            continue; // seed outside the box or fully clipped

        PolytopalElement el;
        for (const auto& p : cell) {
            const int id = node_id(p);
            if (el.node_ids.empty() || (el.node_ids.back() != id && el.node_ids.front() != id))
                el.node_ids.push_back(id);
        }
        if (el.node_ids.size() >= 3)
            mesh.elements.push_back(std::move(el));
    }

    attach_box_sets(mesh, Eigen::Vector3d(lo.x(), lo.y(), 0.0),
                    Eigen::Vector3d(hi.x(), hi.y(), 0.0));
    return mesh;
}

Mesh generate_cmesh_beam(int nx, const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
    if (nx < 1)
        throw ConfigError("cmesh needs at least one block");
    Mesh mesh;
    mesh.dimension = 2;
    const double bx = (hi.x() - lo.x()) / nx;
    const double y0 = lo.y(), y1 = hi.y(), dy = (y1 - y0) / 3.0;

    std::map<std::pair<long long, long long>, int> ids;
    auto node_at = [&](double x, double y) {
        // keys on the block lattice: x multiples of bx/3, y multiples of dy
        const auto key = std::make_pair(static_cast<long long>(std::llround(3.0 * (x - lo.x()) / bx)),
                                        static_cast<long long>(std::llround((y - y0) / dy)));
        auto it = ids.find(key);
        if (it != ids.end())
            return it->second;
        const int id = mesh.n_nodes();
        mesh.nodes.push_back({id, Eigen::Vector3d(x, y, 0.0)});
        ids[key] = id;
        return id;
    };

    for (int b = 0; b < nx; ++b) {
        const double x0 = lo.x() + b * bx, x1 = x0 + bx, xm = x0 + bx / 3.0;
        PolytopalElement cshape;
        cshape.node_ids = {node_at(x0, y0),      node_at(x1, y0),      node_at(x1, y0 + dy),
                           node_at(xm, y0 + dy), node_at(xm, y1 - dy), node_at(x1, y1 - dy),
                           node_at(x1, y1),      node_at(x0, y1),      node_at(x0, y1 - dy),
                           node_at(x0, y0 + dy)};
        PolytopalElement plug;
        plug.node_ids = {node_at(xm, y0 + dy), node_at(x1, y0 + dy), node_at(x1, y1 - dy),
                         node_at(xm, y1 - dy)};
        mesh.elements.push_back(std::move(cshape));
        mesh.elements.push_back(std::move(plug));
    }

    attach_box_sets(mesh, Eigen::Vector3d(lo.x(), lo.y(), 0.0),
                    Eigen::Vector3d(hi.x(), hi.y(), 0.0));
    return mesh;
}

} // namespace polyvem
