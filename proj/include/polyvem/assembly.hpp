#pragma once

#include "polyvem/stabilization.hpp"

#include <Eigen/Sparse>
#include <array>
#include <string>
#include <vector>

namespace polyvem {

struct TimeFunction {
    enum class Kind { Constant, HalfSine };
    Kind kind = Kind::Constant;
    double p_max = 1.0;
    double period = 0.0; ///< half-sine support [0, period]

    /// Constant: p_max. HalfSine: p_max * sin(pi t / period) on [0, period],
    /// zero outside.
    double value(double t) const;
};

enum class BcKind { DirichletFixed, DirichletPrescribed, Traction, BodyForce, InitialVelocity };

struct BoundaryCondition {
    BcKind kind = BcKind::DirichletFixed;
    std::string target;                             ///< boundary set name
    std::array<bool, 3> components{true, true, true}; ///< per-axis mask (Dirichlet kinds)
    Eigen::Vector3d value = Eigen::Vector3d::Zero(); ///< traction / force / velocity / prescribed amplitude
    TimeFunction time_function;                      ///< scaling, defaults to constant 1
};

/// Direct sparse symmetric solve. Contract: on success the residual
/// satisfies |K du - rhs| <= 1e-10 |rhs|. Throws SingularSystem with a
/// near-null pivot count otherwise.
Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& k, const Eigen::VectorXd& rhs);

/// Global model: mesh + material + element operators + DOF partition +
/// loads. DOF index = node * dim + axis. Element operators and the global
/// mass matrix are initial-configuration quantities and are built once.
class Model {
public:
    Model(Mesh mesh, NeoHookean material, StabilizationConfig cfg, int threads = 1);

    void add_bc(const BoundaryCondition& bc);

    /// Constant prescribed displacement on a single DOF (used e.g. by the
    /// patch tests, where every boundary node gets its own value).
    void add_nodal_constraint(int node, int axis, double value);

    /// Resolves targets, builds element operators, the DOF partition and the
    /// global mass matrix. Must be called after all add_bc calls.
    void finalize();

    const Mesh& mesh() const { return mesh_; }
    const NeoHookean& material() const { return material_; }
    const StabilizationConfig& config() const { return cfg_; }
    const std::vector<ElementOperators>& elements() const { return ops_; }

    int dim() const { return mesh_.dimension; }
    int n_dofs() const { return mesh_.n_nodes() * mesh_.dimension; }
    int n_free() const { return n_free_; }
    bool finalized() const { return finalized_; }

    bool is_constrained(int dof) const { return free_index_[static_cast<std::size_t>(dof)] < 0; }
    int free_index(int dof) const { return free_index_[static_cast<std::size_t>(dof)]; }

    /// Prescribed displacement values written into the constrained entries.
    void apply_dirichlet(double t, Eigen::VectorXd& u_full) const;

    /// Initial velocity field from the InitialVelocity conditions
    /// (constrained DOFs forced to zero).
    Eigen::VectorXd initial_velocity() const;

    /// Consistent external load vector (tractions + body forces) at time t.
    Eigen::VectorXd external_force(double t) const;

    struct StaticResult {
        double strain_energy = 0.0;
        Eigen::VectorXd residual;         ///< full-length internal force vector
        Eigen::SparseMatrix<double> k_ff; ///< tangent on free DOFs
    };
    /// Internal static residual/tangent at the full displacement vector.
    /// Element errors are rethrown with the element id attached.
    StaticResult assemble_static(const Eigen::VectorXd& u_full, bool want_tangent,
                                 bool want_energy = false) const;

    const Eigen::SparseMatrix<double>& global_mass() const { return mass_full_; }
    const Eigen::SparseMatrix<double>& mass_ff() const { return mass_ff_; }

    Eigen::VectorXd reduce(const Eigen::VectorXd& full) const;
    void expand_into(const Eigen::VectorXd& reduced, Eigen::VectorXd& full) const;

    int threads() const { return threads_; }

private:
    void resolve_traction_bc(const BoundaryCondition& bc);

    Mesh mesh_;
    NeoHookean material_;
    StabilizationConfig cfg_;
    int threads_ = 1;
    bool finalized_ = false;

    std::vector<BoundaryCondition> bcs_;
    std::vector<std::tuple<int, int, double>> nodal_constraints_;
    std::vector<ElementOperators> ops_;

    std::vector<int> free_index_;
    int n_free_ = 0;
    std::vector<double> constrained_amp_;  ///< per-DOF amplitude
    std::vector<int> constrained_tf_;      ///< index into bcs_, -1 for none

    struct TractionFacet {
        int element = -1;
        Eigen::MatrixXd force_map;   ///< (element dofs) x d, nodal forces per unit traction
        Eigen::Vector3d value;       ///< traction direction/amplitude
        int bc = -1;                 ///< owning boundary condition
    };
    std::vector<TractionFacet> traction_facets_;

    struct BodyLoad {
        Eigen::Vector3d value;
        int bc = -1;
    };
    std::vector<BodyLoad> body_loads_;
    Eigen::MatrixXd body_force_map_; ///< n_dofs x d, nodal forces per unit body force

    Eigen::SparseMatrix<double> mass_full_, mass_ff_;
};

} // namespace polyvem
