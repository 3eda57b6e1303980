#pragma once

#include "polyvem/mesh.hpp"

#include <array>
#include <vector>

namespace polyvem {

enum class StructuredKind {
    Q2S,         ///< 2D, 8-node cells (corners + midsides as boundary vertices)
    H2S,         ///< 3D, 20-node cells (corners + edge midpoints), 8-node face loops
    Q1Polygon,   ///< 2D, 4-node quadrilateral cells
    H1Polyhedron ///< 3D, 8-node hexahedral cells
};

/// Structured mesh on the axis-aligned box [lo, hi] with the given number of
/// divisions per axis. Shared nodes are deduplicated; boundary node and facet
/// sets "xmin".."zmax" plus the node set "all" are attached.
Mesh generate_structured(StructuredKind kind, const std::array<int, 3>& divisions,
                         const Eigen::Vector3d& lo, const Eigen::Vector3d& hi);

/// Clipped Voronoi tessellation of the rectangle [lo, hi]. Cells are convex,
/// ordered counter-clockwise; every seed lies inside its own cell. Throws
/// DuplicateSeeds.
Mesh generate_voronoi_2d(const std::vector<Eigen::Vector2d>& seeds, const Eigen::Vector2d& lo,
                         const Eigen::Vector2d& hi);

/// Jittered-grid seed set for Voronoi meshes (deterministic for a fixed rng
/// seed).
std::vector<Eigen::Vector2d> jittered_seeds(int nx, int ny, const Eigen::Vector2d& lo,
                                            const Eigen::Vector2d& hi, unsigned rng_seed,
                                            double jitter = 0.35);

/// Beam mesh of C-shaped elements with rectangular plugs filling each notch.
/// The C elements are non-convex with centroids outside the element domain.
/// nx blocks along the length, each block two elements.
Mesh generate_cmesh_beam(int nx, const Eigen::Vector2d& lo, const Eigen::Vector2d& hi);

} // namespace polyvem
