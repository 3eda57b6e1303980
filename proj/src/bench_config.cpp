#include "polyvem/bench.hpp"
#include "polyvem/errors.hpp"
#include "polyvem/mesh_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace polyvem {

using nlohmann::json;

Mesh MeshSpec::build() const {
    if (kind == "file")
        return load_mesh(path);
    if (kind == "q2s")
        return generate_structured(StructuredKind::Q2S, divisions, lo, hi);
    if (kind == "h2s")
        return generate_structured(StructuredKind::H2S, divisions, lo, hi);
    if (kind == "q1")
        return generate_structured(StructuredKind::Q1Polygon, divisions, lo, hi);
    if (kind == "h1")
        return generate_structured(StructuredKind::H1Polyhedron, divisions, lo, hi);
    if (kind == "voronoi2d") {
        const auto seeds = jittered_seeds(divisions[0], divisions[1], lo.head<2>(), hi.head<2>(),
                                          rng_seed);
        return generate_voronoi_2d(seeds, lo.head<2>(), hi.head<2>());
    }
    if (kind == "cmesh")
        return generate_cmesh_beam(divisions[0], lo.head<2>(), hi.head<2>());
    if (kind == "cook") {
        // Q2S grid on the unit square mapped bilinearly onto the tapered
        // panel (0,0)-(48,44)-(48,60)-(0,44); straight edges and midside
        // nodes survive the map
        Mesh mesh = generate_structured(StructuredKind::Q2S, divisions, Eigen::Vector3d::Zero(),
                                        Eigen::Vector3d(1.0, 1.0, 0.0));
        for (auto& n : mesh.nodes) {
            const double xi = n.x.x(), eta = n.x.y();
            n.x = Eigen::Vector3d(48.0 * xi, 44.0 * eta * (1.0 - xi) + xi * (44.0 + 16.0 * eta),
                                  0.0);
        }
        return mesh;
    }
    throw ConfigError("unknown mesh kind '" + kind + "'");
}

void SimulationConfig::validate() const {
    newmark.validate();
    if (t_end < 0.0)
        throw ConfigError("t_end must be non-negative");
    if (material.kappa <= 0.0 || material.mu <= 0.0 || material.rho < 0.0)
        throw ConfigError("material constants out of range");
    if (stabilization.beta_stat < 0.0 || stabilization.beta_stat > 1.0 ||
        stabilization.beta_dyn < 0.0 || stabilization.beta_dyn > 1.0)
        throw ConfigError("beta parameters must lie in [0, 1]");
    if (newton.max_iter < 1 || newton.tol_abs <= 0.0)
        throw ConfigError("newton options out of range");
}

namespace {

Eigen::Vector3d vec3_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() < 2 || j.size() > 3)
        throw ConfigError(what + " must be an array of 2 or 3 numbers");
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<int>(i)) = j[i].get<double>();
    return v;
}

TimeFunction time_function_from(const json& j) {
    TimeFunction tf;
    const std::string kind = j.value("kind", "constant");
    if (kind == "constant")
        tf.kind = TimeFunction::Kind::Constant;
    else if (kind == "half_sine")
        tf.kind = TimeFunction::Kind::HalfSine;
    else
        throw ConfigError("unknown time function '" + kind + "'");
    tf.p_max = j.value("p_max", 1.0);
    tf.period = j.value("period", 0.0);
    if (tf.kind == TimeFunction::Kind::HalfSine && tf.period <= 0.0)
        throw ConfigError("half_sine needs a positive period");
    return tf;
}

json time_function_to(const TimeFunction& tf) {
    json j;
    j["kind"] = tf.kind == TimeFunction::Kind::Constant ? "constant" : "half_sine";
    j["p_max"] = tf.p_max;
    if (tf.kind == TimeFunction::Kind::HalfSine)
        j["period"] = tf.period;
    return j;
}

const std::map<std::string, BcKind> kBcNames = {
    {"dirichlet_fixed", BcKind::DirichletFixed},
    {"dirichlet_prescribed", BcKind::DirichletPrescribed},
    {"traction", BcKind::Traction},
    {"body_force", BcKind::BodyForce},
    {"initial_velocity", BcKind::InitialVelocity},
};

} // namespace

SimulationConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& ex) {
        throw ParseError(origin + ": " + ex.what());
    }
    SimulationConfig cfg;
    try {
        const json& jm = j.at("mesh");
        if (jm.contains("file")) {
            cfg.mesh.kind = "file";
            cfg.mesh.path = jm.at("file").get<std::string>();
        } else {
            const json& g = jm.at("generator");
            cfg.mesh.kind = g.at("kind").get<std::string>();
            if (g.contains("divisions")) {
                const auto dv = g.at("divisions").get<std::vector<int>>();
                for (std::size_t i = 0; i < dv.size() && i < 3; ++i)
                    cfg.mesh.divisions[i] = dv[i];
            }
            if (g.contains("box")) {
                cfg.mesh.lo = vec3_from(g.at("box").at(0), "box lo");
                cfg.mesh.hi = vec3_from(g.at("box").at(1), "box hi");
            }
            cfg.mesh.rng_seed = g.value("rng_seed", 42u);
        }

        const json& mat = j.at("material");
        if (mat.contains("E")) {
            cfg.material = from_engineering(mat.at("E").get<double>(), mat.at("nu").get<double>(),
                                            mat.value("rho", 0.0));
        } else {
            cfg.material.kappa = mat.at("kappa").get<double>();
            cfg.material.mu = mat.at("mu").get<double>();
            cfg.material.rho = mat.value("rho", 0.0);
        }

        cfg.stabilization.beta_stat = j.value("beta_stat", 0.4);
        cfg.stabilization.beta_dyn = j.value("beta_dyn", 0.0);
        cfg.stabilization.scaled_monomials = j.value("scaled_monomials", false);
        cfg.stabilization.mass_scheme = mass_scheme_from_string(j.value("mass_scheme", "centroid"));

        const json& nm = j.at("newmark");
        cfg.newmark.dt = nm.at("dt").get<double>();
        cfg.newmark.gamma = nm.value("gamma", 0.5);
        cfg.newmark.zeta = nm.value("zeta", 0.25);
        cfg.t_end = nm.at("t_end").get<double>();

        if (j.contains("newton")) {
            const json& nw = j.at("newton");
            cfg.newton.tol_abs = nw.value("tol_abs", 1e-8);
            cfg.newton.tol_rel = nw.value("tol_rel", 1e-10);
            cfg.newton.max_iter = nw.value("max_iter", 25);
        }

        for (const json& b : j.value("bcs", json::array())) {
            BoundaryCondition bc;
            const std::string kind = b.at("kind").get<std::string>();
            const auto it = kBcNames.find(kind);
            if (it == kBcNames.end())
                throw ConfigError("unknown bc kind '" + kind + "'");
            bc.kind = it->second;
            bc.target = b.at("target").get<std::string>();
            if (b.contains("components")) {
                const auto comps = b.at("components").get<std::vector<bool>>();
                bc.components = {false, false, false};
                for (std::size_t i = 0; i < comps.size() && i < 3; ++i)
                    bc.components[i] = comps[i];
            }
            if (b.contains("value"))
                bc.value = vec3_from(b.at("value"), "bc value");
            if (b.contains("time_function"))
                bc.time_function = time_function_from(b.at("time_function"));
            cfg.bcs.push_back(bc);
        }

        for (const json& p : j.value("probes", json::array())) {
            ProbeSpec ps;
            ps.name = p.at("name").get<std::string>();
            if (p.contains("node"))
                ps.node = p.at("node").get<int>();
            else
                ps.point = vec3_from(p.at("point"), "probe point");
            cfg.probes.push_back(ps);
        }

        if (j.contains("output")) {
            const json& o = j.at("output");
            cfg.output.directory = o.value("directory", std::string());
            cfg.output.history_every = o.value("history_every", 1);
            cfg.output.snapshot_times = o.value("snapshot_times", std::vector<double>());
        }
        cfg.threads = j.value("threads", 1);
        cfg.check_equilibrium = j.value("check_equilibrium", false);
    } catch (const json::exception& ex) {
        throw ConfigError(origin + ": " + ex.what());
    }
    cfg.validate();
    return cfg;
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text, path);
}

std::string dump_config(const SimulationConfig& cfg) {
    json j;
    if (cfg.mesh.kind == "file") {
        j["mesh"]["file"] = cfg.mesh.path;
    } else {
        json g;
        g["kind"] = cfg.mesh.kind;
        g["divisions"] = cfg.mesh.divisions;
        g["box"] = {{cfg.mesh.lo.x(), cfg.mesh.lo.y(), cfg.mesh.lo.z()},
                    {cfg.mesh.hi.x(), cfg.mesh.hi.y(), cfg.mesh.hi.z()}};
        g["rng_seed"] = cfg.mesh.rng_seed;
        j["mesh"]["generator"] = g;
    }
    j["material"] = {{"kappa", cfg.material.kappa}, {"mu", cfg.material.mu},
                     {"rho", cfg.material.rho}};
    j["beta_stat"] = cfg.stabilization.beta_stat;
    j["beta_dyn"] = cfg.stabilization.beta_dyn;
    j["scaled_monomials"] = cfg.stabilization.scaled_monomials;
    j["mass_scheme"] = to_string(cfg.stabilization.mass_scheme);
    j["newmark"] = {{"dt", cfg.newmark.dt}, {"t_end", cfg.t_end}, {"gamma", cfg.newmark.gamma},
                    {"zeta", cfg.newmark.zeta}};
    j["newton"] = {{"tol_abs", cfg.newton.tol_abs}, {"tol_rel", cfg.newton.tol_rel},
                   {"max_iter", cfg.newton.max_iter}};
    json bcs = json::array();
    for (const auto& bc : cfg.bcs) {
        json b;
        for (const auto& [name, kind] : kBcNames)
            if (kind == bc.kind)
                b["kind"] = name;
        b["target"] = bc.target;
        b["components"] = {bc.components[0], bc.components[1], bc.components[2]};
        b["value"] = {bc.value.x(), bc.value.y(), bc.value.z()};
        b["time_function"] = time_function_to(bc.time_function);
        bcs.push_back(b);
    }
    j["bcs"] = bcs;
    json probes = json::array();
    for (const auto& p : cfg.probes) {
        json pj;
        pj["name"] = p.name;
        if (p.node)
            pj["node"] = *p.node;
        else
            pj["point"] = {p.point.x(), p.point.y(), p.point.z()};
        probes.push_back(pj);
    }
    j["probes"] = probes;
    j["output"] = {{"directory", cfg.output.directory},
                   {"history_every", cfg.output.history_every},
                   {"snapshot_times", cfg.output.snapshot_times}};
    j["threads"] = cfg.threads;
    j["check_equilibrium"] = cfg.check_equilibrium;
    return j.dump(1);
}

BenchmarkPreset preset_from_string(const std::string& name) {
    if (name == "Bar2D") return BenchmarkPreset::Bar2D;
    if (name == "TransversalBeam2D") return BenchmarkPreset::TransversalBeam2D;
    if (name == "Cooks2D") return BenchmarkPreset::Cooks2D;
    if (name == "Bar3D") return BenchmarkPreset::Bar3D;
    if (name == "Beam3D") return BenchmarkPreset::Beam3D;
    if (name == "Plate3D") return BenchmarkPreset::Plate3D;
    throw ConfigError("unknown preset '" + name + "'");
}

double wave_speed(double E, double rho) { return std::sqrt(E / rho); }

SimulationConfig preset_config(BenchmarkPreset preset) {
    SimulationConfig cfg;
    cfg.material = from_engineering(210000.0, 0.3, 2.7e-9);
    const double c = wave_speed(210000.0, 2.7e-9);
    const double omega_factor = 1.0 / 0.95;

    auto fix = [](const std::string& target, std::array<bool, 3> comps) {
        BoundaryCondition bc;
        bc.kind = BcKind::DirichletFixed;
        bc.target = target;
        bc.components = comps;
        return bc;
    };
    auto velocity = [](const Eigen::Vector3d& v) {
        BoundaryCondition bc;
        bc.kind = BcKind::InitialVelocity;
        bc.target = "all";
        bc.value = v;
        return bc;
    };
    auto traction = [](const std::string& target, const Eigen::Vector3d& value, double period) {
        BoundaryCondition bc;
        bc.kind = BcKind::Traction;
        bc.target = target;
        bc.value = value;
        bc.time_function = {TimeFunction::Kind::HalfSine, 1.0, period};
        return bc;
    };

    switch (preset) {
    case BenchmarkPreset::Bar2D: {
        const double l = 30.0, h = 0.3, v0 = 20.0e3;
        cfg.mesh = {"q2s", {100, 4, 1}, Eigen::Vector3d::Zero(), Eigen::Vector3d(l, h, 0.0)};
        cfg.bcs = {fix("xmin", {true, false, false}), velocity({v0, 0.0, 0.0})};
        cfg.newmark.dt = l / (200.0 * c);
        cfg.t_end = 3.0 * 2.0 * l / (c * omega_factor);
        cfg.probes = {{"mid", std::nullopt, {l / 2.0, h / 2.0, 0.0}},
                      {"end", std::nullopt, {l, h / 2.0, 0.0}}};
        break;
    }
    case BenchmarkPreset::TransversalBeam2D: {
        const double l = 30.0, h = 5.0, p_max = 100.0e3; // 100 kN over the tip edge
        const double period = beam_force_period(210.0, 0.0027, l, 1.0, h);
        cfg.mesh = {"q2s", {20, 5, 1}, Eigen::Vector3d::Zero(), Eigen::Vector3d(l, h, 0.0)};
        cfg.bcs = {fix("xmin", {true, true, true}),
                   traction("xmax", {0.0, -p_max / h, 0.0}, period)};
        cfg.newmark.dt = period / 100.0;
        cfg.t_end = 2.53e-4; // two bending periods
        cfg.probes = {{"mid", std::nullopt, {l / 2.0, h / 2.0, 0.0}},
                      {"tip", std::nullopt, {l, h / 2.0, 0.0}}};
        break;
    }
    case BenchmarkPreset::Cooks2D: {
        const double p_max = 10000.0e3; // kN/mm over the loaded edge
        const double period = 1.0e-4;
        cfg.mesh = {"cook", {8, 8, 1}, Eigen::Vector3d::Zero(), Eigen::Vector3d::Ones()};
        cfg.bcs = {fix("xmin", {true, true, true}), traction("xmax", {0.0, p_max, 0.0}, period)};
        cfg.newmark.dt = period / 100.0;
        cfg.t_end = 6.5e-4;
        cfg.probes = {{"corner", std::nullopt, {48.0, 60.0, 0.0}}};
        break;
    }
    case BenchmarkPreset::Bar3D: {
        const double l = 30.0, h = 5.0, v0 = 20.0e3;
        cfg.mesh = {"h2s", {15, 2, 2}, Eigen::Vector3d::Zero(), Eigen::Vector3d(l, h, h)};
        cfg.bcs = {fix("xmin", {true, false, false}), velocity({v0, 0.0, 0.0})};
        cfg.newmark.dt = l / (200.0 * c);
        cfg.t_end = 3.0 * 2.0 * l / (c * omega_factor);
        cfg.probes = {{"mid", std::nullopt, {l / 2.0, h / 2.0, h / 2.0}},
                      {"end", std::nullopt, {l, h / 2.0, h / 2.0}}};
        break;
    }
    case BenchmarkPreset::Beam3D: {
        const double l = 30.0, h = 5.0, p_line = 6.0e3; // 6 kN/mm along the tip width
        const double period = beam_force_period(210.0, 0.0027, l, h, h);
        cfg.mesh = {"h2s", {12, 2, 2}, Eigen::Vector3d::Zero(), Eigen::Vector3d(l, h, h)};
        // line load spread over the tip face as an equivalent uniform traction
        cfg.bcs = {fix("xmin", {true, true, true}),
                   traction("xmax", {0.0, 0.0, -p_line / h}, period)};
        cfg.newmark.dt = period / 100.0;
        cfg.t_end = 2.53e-4;
        cfg.probes = {{"tip", std::nullopt, {l, h / 2.0, h / 2.0}}};
        break;
    }
    case BenchmarkPreset::Plate3D: {
        const double l = 30.0, b = 30.0, h = 5.0, v0 = 200.0e3;
        cfg.mesh = {"h2s", {16, 16, 4}, Eigen::Vector3d::Zero(), Eigen::Vector3d(l, b, h)};
        cfg.bcs = {fix("xmin", {true, true, true}), fix("xmax", {true, true, true}),
                   fix("ymin", {true, true, true}), fix("ymax", {true, true, true}),
                   velocity({0.0, 0.0, v0})};
        cfg.newmark.dt = 1.2e-7;
        cfg.t_end = 2.4e-5;
        cfg.probes = {{"center", std::nullopt, {l / 2.0, b / 2.0, h / 2.0}}};
        break;
    }
    }
    return cfg;
}

} // namespace polyvem
