#include "polyvem/bench.hpp"
#include "polyvem/errors.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <memory>

namespace polyvem {

double analytical_bar_displacement(double x, double t, double v0, double c, double l,
                                   int max_terms, double omega_factor) {
    if (max_terms < 1)
        throw ConfigError("series needs at least one term");
    double u = 0.0;
    const double tol = 1e-12 * l;
    for (int n = 0; n < max_terms; ++n) {
        const double w = omega_factor * (2.0 * n + 1.0) * M_PI * c / (2.0 * l);
        const double amp = 2.0 * v0 * c / (l * w * w);
        u += amp * std::sin(w * x / c) * std::sin(w * t);
        if (amp < tol)
            break;
    }
    return u;
}

double beam_force_period(double E, double rho, double l, double b, double h) {
    if (E <= 0.0 || rho <= 0.0 || l <= 0.0 || b <= 0.0 || h <= 0.0)
        throw ConfigError("beam period needs positive inputs");
    return 3.5156 / (2.0 * M_PI * l * l) * std::sqrt(12.0 * rho / (E * b * h * h * h));
}

namespace {

int nearest_node(const Mesh& mesh, const Eigen::Vector3d& point) {
    const double tol = 1e-9 * std::max(1.0, mesh.bbox_diagonal());
    Eigen::Vector3d lo = mesh.nodes.front().x, hi = lo;
    for (const auto& n : mesh.nodes) {
        lo = lo.cwiseMin(n.x);
        hi = hi.cwiseMax(n.x);
    }
    for (int a = 0; a < 3; ++a)
        if (point(a) < lo(a) - tol || point(a) > hi(a) + tol)
            throw ValidationError("probe point outside the mesh bounding box");
    int best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (const auto& n : mesh.nodes) {
        const double d = (n.x - point).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = n.id;
        }
    }
    return best;
}

struct EquilibriumCheck {
    double gap = 0.0;
};

EquilibriumCheck equilibrium_gap(const Model& model, const NewmarkState& s,
                                 const Eigen::VectorXd& r_int) {
    const int d = model.dim();
    const Eigen::VectorXd inertial = model.global_mass() * s.a;
    const Eigen::VectorXd f_ext = model.external_force(s.t);
    EquilibriumCheck out;
    for (int axis = 0; axis < d; ++axis) {
        double sum = 0.0, scale = 0.0;
        for (int i = axis; i < model.n_dofs(); i += d) {
            const double v = r_int(i) + inertial(i) - f_ext(i);
            sum += v;
            scale += std::abs(inertial(i)) + std::abs(f_ext(i));
            if (model.is_constrained(i))
                scale += std::abs(v);
        }
        out.gap = std::max(out.gap, std::abs(sum) / std::max(scale, 1e-30));
    }
    return out;
}

} // namespace

RunResult run(const SimulationConfig& cfg) {
    cfg.validate();
    const auto wall_start = std::chrono::steady_clock::now();

    Mesh mesh = cfg.mesh.build();
    Model model(std::move(mesh), cfg.material, cfg.stabilization, cfg.threads);
    for (const auto& bc : cfg.bcs)
        model.add_bc(bc);
    model.finalize();

    RunResult result;
    for (const auto& ps : cfg.probes) {
        ProbeHistory h;
        h.name = ps.name;
        h.node = ps.node ? *ps.node : nearest_node(model.mesh(), ps.point);
        if (h.node < 0 || h.node >= model.mesh().n_nodes())
            throw ValidationError("probe node " + std::to_string(h.node) + " out of range");
        result.probes.push_back(std::move(h));
    }

    NewmarkState state;
    state.t = 0.0;
    state.u = Eigen::VectorXd::Zero(model.n_dofs());
    model.apply_dirichlet(0.0, state.u);
    state.v = model.initial_velocity();
    state.a = initial_acceleration(model, state.u);

    const bool writing = !cfg.output.directory.empty();
    std::vector<std::unique_ptr<ProbeWriter>> writers;
    if (writing) {
        std::filesystem::create_directories(cfg.output.directory);
        for (const auto& p : result.probes)
            writers.push_back(std::make_unique<ProbeWriter>(
                cfg.output.directory + "/" + p.name + ".csv", model.dim()));
    }

    const int n_steps = static_cast<int>(std::llround(cfg.t_end / cfg.newmark.dt));
    std::vector<int> snapshot_steps;
    for (double ts : cfg.output.snapshot_times)
        snapshot_steps.push_back(
            std::clamp(static_cast<int>(std::llround(ts / cfg.newmark.dt)), 0, n_steps));

    RunSummary& summary = result.summary;

    auto record = [&](const NewmarkState& s, int step_index) {
        const int d = model.dim();
        for (std::size_t p = 0; p < result.probes.size(); ++p) {
            auto& h = result.probes[p];
            h.t.push_back(s.t);
            h.u.push_back(s.u.segment(h.node * d, d));
            h.v.push_back(s.v.segment(h.node * d, d));
            h.a.push_back(s.a.segment(h.node * d, d));
            if (writing)
                writers[p]->write_row(s.t, s.u, s.v, s.a, h.node);
        }
        const auto st = model.assemble_static(s.u, false, true);
        EnergySample es;
        es.t = s.t;
        es.kinetic = 0.5 * s.v.dot(model.global_mass() * s.v);
        es.strain = st.strain_energy;
        summary.energy.push_back(es);
        if (cfg.check_equilibrium && step_index > 0)
            summary.max_equilibrium_gap =
                std::max(summary.max_equilibrium_gap, equilibrium_gap(model, s, st.residual).gap);
        if (writing) {
            for (std::size_t k = 0; k < snapshot_steps.size(); ++k)
                if (snapshot_steps[k] == step_index)
                    write_vtk_snapshot(model.mesh(), s.u,
                                       cfg.output.directory + "/snapshot_" + std::to_string(k) +
                                           ".vtk");
        }
    };

    record(state, 0);
    result.initial_energy = summary.energy.front().kinetic + summary.energy.front().strain;

    for (int k = 1; k <= n_steps; ++k) {
        StepStats stats;
        state = step(model, state, cfg.newmark, cfg.newton, &stats);
        summary.newton_iterations += stats.newton_iterations;
        if (k % cfg.output.history_every == 0 || k == n_steps)
            record(state, k);
    }
    summary.steps = n_steps;
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

    result.final_state = state;
    if (writing)
        write_summary(summary, cfg.output.directory + "/summary.json");
    return result;
}

} // namespace polyvem
