#pragma once

#include "polyvem/geometry.hpp"

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace polyvem {

struct Node {
    int id = -1;
    Eigen::Vector3d x = Eigen::Vector3d::Zero(); ///< z unused in 2D
};

/// Polygon (ordered counter-clockwise boundary loop) or polyhedron (vertex
/// set plus outward-oriented face loops). Non-convex shapes are permitted;
/// the centroid may lie outside the element.
struct PolytopalElement {
    std::vector<int> node_ids;
    std::vector<std::vector<int>> faces; ///< 3D only, global node ids per face loop
    int tag = 0;
};

struct BoundarySet {
    std::vector<int> nodes;
    std::vector<std::vector<int>> facets; ///< 2D: node pairs, 3D: face loops
};

class Mesh {
public:
    int dimension = 2;
    std::vector<Node> nodes;
    std::vector<PolytopalElement> elements;
    std::map<std::string, BoundarySet> boundary_sets;

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_elements() const { return static_cast<int>(elements.size()); }

    Eigen::Vector3d node_x(int id) const { return nodes[static_cast<std::size_t>(id)].x; }

    double bbox_diagonal() const;

    /// Checks ids, duplicate nodes, loop orientation/simplicity (2D), face
    /// closure and positive measure (3D), and boundary set references.
    /// Throws ValidationError / NonClosedSurface / OrientationError.
    void validate() const;

    /// Boundary facets as sorted-key counting: 2D edges owned by one element,
    /// 3D faces owned by one element. Each entry is (element index, facet
    /// node ids in element orientation).
    std::vector<std::pair<int, std::vector<int>>> boundary_facets() const;

    /// Node ids lying on the mesh boundary.
    std::vector<int> boundary_nodes() const;
};

/// Element node coordinates as an n x d matrix.
Eigen::MatrixXd element_coords(const Mesh& mesh, const PolytopalElement& elem);

/// Measure (area/volume) and centroid of an element.
/// 2D: boundary moment formulas; 3D: divergence theorem over triangulated
/// faces. Throws DegenerateElement / NonClosedSurface.
void element_measure_centroid(const Mesh& mesh, const PolytopalElement& elem,
                              double& measure, Eigen::Vector3d& centroid);

/// Fan triangulation of all faces of a 3D element. Degenerate (collinear)
/// triangles are retained but flagged. Throws FaceTooSmall on faces with
/// fewer than 3 nodes.
std::vector<geometry::SurfaceTriangle> triangulate_faces(const Mesh& mesh,
                                                         const PolytopalElement& elem);

/// Submesh of simplices using only existing element nodes. 2D: fan from
/// vertex 0 with ear-clipping fallback for non-convex loops; 3D: apex rule
/// from the lowest-id vertex. Near-zero simplices (measure < 1e-14 times the
/// element measure) are filtered. Throws SubdivisionFailed when a 3D element
/// is not star-shaped from the apex.
std::vector<geometry::Simplex> subdivide_element(const Mesh& mesh, const PolytopalElement& elem);

} // namespace polyvem
