#pragma once

#include "polyvem/mesh.hpp"

#include <Eigen/Dense>
#include <fstream>
#include <string>
#include <vector>

namespace polyvem {

/// Probe history CSV: one row per sample, columns
/// t, u_x.., v_x.., a_x.. for the probe's node. Values are written with
/// round-trip precision ("%.17g"), so files are bit-stable.
class ProbeWriter {
public:
    ProbeWriter(const std::string& path, int dim);
    void write_row(double t, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                   const Eigen::VectorXd& a, int node);

private:
    std::ofstream out_;
    int dim_;
};

std::string format_double(double v);

/// VTK legacy unstructured-grid snapshot: polygons as cell type 7, polyhedra
/// exported as their triangulated boundary (cell type 5), displacements as
/// point vectors.
void write_vtk_snapshot(const Mesh& mesh, const Eigen::VectorXd& u, const std::string& path,
                        const std::string& title = "polyvem snapshot");

struct EnergySample {
    double t = 0.0;
    double kinetic = 0.0;
    double strain = 0.0;
};

struct RunSummary {
    int steps = 0;
    int newton_iterations = 0;
    double wall_seconds = 0.0;
    double max_equilibrium_gap = 0.0;
    std::vector<EnergySample> energy;
};

void write_summary(const RunSummary& s, const std::string& path);

} // namespace polyvem
