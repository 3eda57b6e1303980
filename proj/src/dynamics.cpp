#include "polyvem/dynamics.hpp"
#include "polyvem/errors.hpp"

#include <cmath>

namespace polyvem {

void NewmarkParams::validate() const {
    if (zeta <= 0.0)
        throw ConfigError("newmark zeta must be positive");
    if (gamma < 0.0 || gamma > 1.0)
        throw ConfigError("newmark gamma must be in [0, 1]");
    if (dt <= 0.0)
        throw ConfigError("time step must be positive");
}

void newmark_update(const NewmarkState& state, const Eigen::VectorXd& u_next,
                    const NewmarkParams& p, Eigen::VectorXd& v_next, Eigen::VectorXd& a_next) {
    const double dt = p.dt;
    a_next = (u_next - state.u) / (p.zeta * dt * dt) - state.v / (p.zeta * dt) -
             (0.5 / p.zeta - 1.0) * state.a;
    v_next = state.v + dt * ((1.0 - p.gamma) * state.a + p.gamma * a_next);
}

Eigen::VectorXd newmark_acceleration(const NewmarkState& state, const Eigen::VectorXd& u_next,
                                     const NewmarkParams& p) {
    const double dt = p.dt;
    return (u_next - state.u) / (p.zeta * dt * dt) - state.v / (p.zeta * dt) -
           (0.5 / p.zeta - 1.0) * state.a;
}

Eigen::VectorXd initial_acceleration(const Model& model, const Eigen::VectorXd& u0) {
    const auto st = model.assemble_static(u0, false);
    const Eigen::VectorXd rhs_full = model.external_force(0.0) - st.residual;
    const Eigen::VectorXd rhs = model.reduce(rhs_full);

    // The projection-only mass is rank-deficient; a tiny Tikhonov shift
    // selects the solution with zero component on the null space.
    Eigen::SparseMatrix<double> m = model.mass_ff();
    double tr = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        tr += m.coeff(i, i);
    const double tau = (m.rows() > 0) ? 1e-12 * std::max(tr / m.rows(), 1e-300) : 0.0;
    Eigen::SparseMatrix<double> shift(m.rows(), m.cols());
    shift.setIdentity();
    m += tau * shift;

    Eigen::VectorXd a = Eigen::VectorXd::Zero(model.n_dofs());
    if (m.rows() > 0) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(m);
        if (ldlt.info() != Eigen::Success)
            throw SingularSystem("mass factorization failed in initial acceleration");
        const Eigen::VectorXd af = ldlt.solve(rhs);
        if (!af.allFinite())
            throw SingularSystem("initial acceleration solve produced non-finite values");
        model.expand_into(af, a);
    }
    return a;
}

namespace {

Eigen::VectorXd total_residual(const Model& model, const NewmarkState& state,
                               const Eigen::VectorXd& u_full, const NewmarkParams& p,
                               double t_next, Eigen::SparseMatrix<double>* k_eff) {
    const auto st = model.assemble_static(u_full, k_eff != nullptr);
    Eigen::VectorXd r = st.residual + model.global_mass() * newmark_acceleration(state, u_full, p) -
                        model.external_force(t_next);
    if (k_eff)
        *k_eff = st.k_ff + (1.0 / (p.zeta * p.dt * p.dt)) * model.mass_ff();
    return r;
}

} // namespace

NewmarkState step(const Model& model, const NewmarkState& state, const NewmarkParams& p,
                  const NewtonOptions& opts, StepStats* stats) {
    p.validate();
    const double t_next = state.t + p.dt;

    // predictor: constant-acceleration extrapolation, prescribed values at t_next
    Eigen::VectorXd u = state.u + p.dt * state.v + (0.5 - p.zeta) * p.dt * p.dt * state.a;
    model.apply_dirichlet(t_next, u);

    Eigen::SparseMatrix<double> k_eff;
    Eigen::VectorXd r_full = total_residual(model, state, u, p, t_next, &k_eff);
    double r0 = model.reduce(r_full).lpNorm<Eigen::Infinity>();
    if (stats)
        stats->residual_history.push_back(r0);

    int iter = 0;
    double rnorm = r0;
    while (rnorm > opts.tol_abs && rnorm > opts.tol_rel * std::max(r0, 1e-300)) {
        if (iter++ >= opts.max_iter)
            throw NewtonDiverged("no convergence in " + std::to_string(opts.max_iter) +
                                 " iterations at t = " + std::to_string(t_next) +
                                 ", |R| = " + std::to_string(rnorm));
        const Eigen::VectorXd du = linear_solve(k_eff, -model.reduce(r_full));

        // step cut: halve the update while it inverts an element
        double scale = 1.0;
        Eigen::VectorXd u_trial;
        for (int cut = 0;; ++cut) {
            u_trial = u;
            Eigen::VectorXd du_full = Eigen::VectorXd::Zero(model.n_dofs());
            model.expand_into(scale * du, du_full);
            u_trial += du_full;
            try {
                r_full = total_residual(model, state, u_trial, p, t_next, &k_eff);
                break;
            } catch (const InvertedElement&) {
                if (cut >= opts.max_step_cuts)
                    throw NewtonDiverged("element inversion persists after " +
                                         std::to_string(opts.max_step_cuts) +
                                         " step cuts at t = " + std::to_string(t_next));
                scale *= 0.5;
            }
        }
        u = u_trial;
        rnorm = model.reduce(r_full).lpNorm<Eigen::Infinity>();
        if (stats)
            stats->residual_history.push_back(rnorm);
    }

    NewmarkState next;
    next.t = t_next;
    next.u = u;
    newmark_update(state, u, p, next.v, next.a);
    // prescribed DOFs carry the imposed motion, not the Newmark recursion
    for (int i = 0; i < model.n_dofs(); ++i)
        if (model.is_constrained(i)) {
            next.v(i) = (next.u(i) - state.u(i)) / p.dt;
            next.a(i) = (next.v(i) - state.v(i)) / p.dt;
        }
    if (stats) {
        stats->newton_iterations = iter;
        stats->residual_norm = rnorm;
    }
    return next;
}

Eigen::VectorXd solve_static(const Model& model, const Eigen::VectorXd& u_start, double t,
                             const NewtonOptions& opts, StepStats* stats) {
    Eigen::VectorXd u = u_start;
    model.apply_dirichlet(t, u);
    const Eigen::VectorXd f_ext = model.external_force(t);

    auto residual = [&](const Eigen::VectorXd& uu, Eigen::SparseMatrix<double>* k) {
        const auto st = model.assemble_static(uu, k != nullptr);
        if (k)
            *k = st.k_ff;
        return Eigen::VectorXd(st.residual - f_ext);
    };

    Eigen::SparseMatrix<double> k;
    Eigen::VectorXd r_full = residual(u, &k);
    double r0 = model.reduce(r_full).lpNorm<Eigen::Infinity>();
    if (stats)
        stats->residual_history.push_back(r0);
    double rnorm = r0;
    int iter = 0;
    while (rnorm > opts.tol_abs && rnorm > opts.tol_rel * std::max(r0, 1e-300)) {
        if (iter++ >= opts.max_iter)
            throw NewtonDiverged("static solve: no convergence in " +
                                 std::to_string(opts.max_iter) + " iterations, |R| = " +
                                 std::to_string(rnorm));
        const Eigen::VectorXd du = linear_solve(k, -model.reduce(r_full));
        double scale = 1.0;
        for (int cut = 0;; ++cut) {
            Eigen::VectorXd u_trial = u;
            Eigen::VectorXd du_full = Eigen::VectorXd::Zero(model.n_dofs());
            model.expand_into(scale * du, du_full);
            u_trial += du_full;
            try {
                r_full = residual(u_trial, &k);
                u = u_trial;
                break;
            } catch (const InvertedElement&) {
                if (cut >= opts.max_step_cuts)
                    throw NewtonDiverged("static solve: element inversion persists");
                scale *= 0.5;
            }
        }
        rnorm = model.reduce(r_full).lpNorm<Eigen::Infinity>();
        if (stats)
            stats->residual_history.push_back(rnorm);
    }
    if (stats) {
        stats->newton_iterations = iter;
        stats->residual_norm = rnorm;
    }
    return u;
}

} // namespace polyvem
