#pragma once

#include "polyvem/assembly.hpp"

#include <functional>

namespace polyvem {

struct NewmarkParams {
    double gamma = 0.5;
    double zeta = 0.25;
    double dt = 0.0;

    void validate() const;
};

struct NewtonOptions {
    double tol_abs = 1e-8;  ///< on the infinity norm of the free residual (N)
    double tol_rel = 1e-10; ///< relative to the first iterate
    int max_iter = 25;
    int max_step_cuts = 8; ///< halvings of the update on element inversion
};

struct NewmarkState {
    double t = 0.0;
    Eigen::VectorXd u, v, a;
};

struct StepStats {
    int newton_iterations = 0;
    double residual_norm = 0.0;
    std::vector<double> residual_history;
};

/// New velocity and acceleration from the converged displacement:
///   a_{n+1} = (u_{n+1} - u_n)/(zeta dt^2) - v_n/(zeta dt) - (1/(2 zeta) - 1) a_n
///   v_{n+1} = v_n + dt ((1 - gamma) a_n + gamma a_{n+1})
void newmark_update(const NewmarkState& state, const Eigen::VectorXd& u_next,
                    const NewmarkParams& p, Eigen::VectorXd& v_next, Eigen::VectorXd& a_next);

/// Inertial residual M * a(u_next) and the constant tangent factor
/// 1/(zeta dt^2); the acceleration argument is affine in u_next.
Eigen::VectorXd newmark_acceleration(const NewmarkState& state, const Eigen::VectorXd& u_next,
                                     const NewmarkParams& p);

/// Consistent initial acceleration: solves M a0 = F_ext(0) - R_int(u0) in
/// the pseudo-inverse sense (zero on the projection null space). Throws
/// SingularSystem if the regularized solve fails.
Eigen::VectorXd initial_acceleration(const Model& model, const Eigen::VectorXd& u0);

/// One implicit Newmark step: Newton iteration on the total residual
///   R(u) = R_int(u) + M a(u) - F_ext(t_{n+1})
/// with tangent K + M/(zeta dt^2). Throws NewtonDiverged / SingularSystem.
NewmarkState step(const Model& model, const NewmarkState& state, const NewmarkParams& p,
                  const NewtonOptions& opts, StepStats* stats = nullptr);

/// Static equilibrium solve (no inertia) at time t for the load evaluation,
/// starting from u_start.
Eigen::VectorXd solve_static(const Model& model, const Eigen::VectorXd& u_start, double t,
                             const NewtonOptions& opts, StepStats* stats = nullptr);

} // namespace polyvem
