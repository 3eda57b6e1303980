#pragma once

#include "polyvem/dynamics.hpp"
#include "polyvem/mesh_generators.hpp"
#include "polyvem/output.hpp"

#include <map>
#include <optional>
#include <string>

namespace polyvem {

/// Mesh source: inline generator spec or a mesh file path.
struct MeshSpec {
    std::string kind;              ///< q2s | h2s | q1 | h1 | voronoi2d | cmesh | cook | file
    std::array<int, 3> divisions{1, 1, 1};
    Eigen::Vector3d lo = Eigen::Vector3d::Zero();
    Eigen::Vector3d hi = Eigen::Vector3d::Ones();
    unsigned rng_seed = 42; ///< voronoi2d jitter seed
    std::string path;       ///< kind == file

    Mesh build() const;
};

struct ProbeSpec {
    std::string name;
    std::optional<int> node;
    Eigen::Vector3d point = Eigen::Vector3d::Zero(); ///< used when node is unset
};

struct OutputSpec {
    std::string directory;
    int history_every = 1;
    std::vector<double> snapshot_times;
};

struct SimulationConfig {
    MeshSpec mesh;
    NeoHookean material;
    StabilizationConfig stabilization;
    NewmarkParams newmark;
    double t_end = 0.0;
    NewtonOptions newton;
    std::vector<BoundaryCondition> bcs;
    std::vector<ProbeSpec> probes;
    OutputSpec output;
    int threads = 1;
    bool check_equilibrium = false;

    void validate() const;
};

SimulationConfig parse_config(const std::string& json_text, const std::string& origin = "<config>");
SimulationConfig load_config(const std::string& path);
std::string dump_config(const SimulationConfig& cfg);

/// The built-in benchmark problems with the published geometry and load
/// constants baked in.
enum class BenchmarkPreset { Bar2D, TransversalBeam2D, Cooks2D, Bar3D, Beam3D, Plate3D };

BenchmarkPreset preset_from_string(const std::string& name);
SimulationConfig preset_config(BenchmarkPreset preset);

/// Series solution of the free-fixed bar with uniform initial velocity,
///   u(x,t) = sum_n 2 v0 c / (l w_n^2) sin(w_n x / c) sin(w_n t),
///   w_n = omega_factor (2n+1) pi c / (2 l).
/// Terms are added until the amplitude bound drops below 1e-12 l (or
/// max_terms). x is the distance from the fixed end.
double analytical_bar_displacement(double x, double t, double v0, double c, double l,
                                   int max_terms = 200000, double omega_factor = 1.0 / 0.95);

/// Half-sine load period tied to the beam bending stiffness,
///   T = 3.5156 / (2 pi l^2) sqrt(12 rho / (E b h^3)).
double beam_force_period(double E, double rho, double l, double b, double h);

/// Longitudinal wave speed sqrt(E / rho).
double wave_speed(double E, double rho);

struct ProbeHistory {
    std::string name;
    int node = -1;
    std::vector<double> t;
    std::vector<Eigen::VectorXd> u, v, a; ///< per sample, length dim
};

struct RunResult {
    RunSummary summary;
    std::vector<ProbeHistory> probes;
    NewmarkState final_state;
    double initial_energy = 0.0;
};

/// Runs the configured simulation; writes CSV histories, optional VTK
/// snapshots and a machine-readable summary when an output directory is set.
RunResult run(const SimulationConfig& cfg);

/// Verification suites (also used by the acceptance tests). Each returns
/// true on pass and appends a human-readable report.
bool verify_patch(int dim, const std::string& mesh_kind, std::string& report);
bool verify_fd(std::string& report);
bool verify_mass(std::string& report);

} // namespace polyvem
