#pragma once

#include "polyvem/mass.hpp"
#include "polyvem/material.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/projection.hpp"

#include <Eigen/Dense>
#include <optional>

namespace polyvem {

struct StabilizationConfig {
    double beta_stat = 0.4; ///< useful range [0.2, 0.6]; 1 = pure simplex FEM
    double beta_dyn = 0.0;  ///< 0 = projection-only mass
    bool scaled_monomials = false;
    MassScheme mass_scheme = MassScheme::Centroid;
};

/// Immutable per-element operators: projection, stabilization submesh with
/// constant simplex gradients, and the (beta_dyn-blended) mass matrix. All
/// quantities refer to the initial configuration, so they are computed once.
struct ElementOperators {
    int dim = 2;
    std::vector<int> node_ids;
    Eigen::MatrixXd coords; ///< n x d
    ProjectionOperator proj;
    std::vector<geometry::Simplex> submesh;
    std::vector<Eigen::MatrixXd> simplex_grads; ///< per simplex: d x (d+1), column a = grad N_a
    Eigen::MatrixXd mass;

    double measure() const { return proj.measure; }
    int n_dofs() const { return dim * static_cast<int>(node_ids.size()); }
};

ElementOperators build_element_operators(const Mesh& mesh, int elem_index,
                                         const NeoHookean& mat, const StabilizationConfig& cfg);

/// Strain energy of the projected field, psi(C at the constant projected
/// gradient) * measure, with residual and tangent via the gradient map.
/// Throws InvertedElement when det F <= 0.
void consistency_static(const ElementOperators& ops, const NeoHookean& mat,
                        const Eigen::VectorXd& u_e, double* energy, Eigen::VectorXd* residual,
                        Eigen::MatrixXd* tangent);

/// Strain energy of the nodal field on the simplex submesh (constant
/// gradient per simplex, centroid-rule integration).
void stabilization_static(const ElementOperators& ops, const NeoHookean& mat,
                          const Eigen::VectorXd& u_e, double* energy, Eigen::VectorXd* residual,
                          Eigen::MatrixXd* tangent);

/// beta-blended static element contribution:
///   (1 - beta_stat) * consistency + beta_stat * stabilization.
void element_static(const ElementOperators& ops, const NeoHookean& mat, double beta_stat,
                    const Eigen::VectorXd& u_e, double* energy, Eigen::VectorXd* residual,
                    Eigen::MatrixXd* tangent);

} // namespace polyvem
