#include "polyvem/output.hpp"
#include "polyvem/errors.hpp"

#include <json.hpp>

#include <cstdio>

namespace polyvem {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ProbeWriter::ProbeWriter(const std::string& path, int dim) : out_(path), dim_(dim) {
    if (!out_)
        throw Error("cannot open probe file '" + path + "'", 2);
    const char* axes = "xyz";
    out_ << "t";
    for (const char* q : {"u", "v", "a"})
        for (int i = 0; i < dim_; ++i)
            out_ << "," << q << "_" << axes[i];
    out_ << "\n";
}

void ProbeWriter::write_row(double t, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                            const Eigen::VectorXd& a, int node) {
    out_ << format_double(t);
    for (const Eigen::VectorXd* q : {&u, &v, &a})
        for (int i = 0; i < dim_; ++i)
            out_ << "," << format_double((*q)(node * dim_ + i));
    out_ << "\n";
}

void write_vtk_snapshot(const Mesh& mesh, const Eigen::VectorXd& u, const std::string& path,
                        const std::string& title) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open snapshot file '" + path + "'", 2);
    const int d = mesh.dimension;
    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.n_nodes() << " double\n";
    for (const auto& n : mesh.nodes)
        out << format_double(n.x.x()) << " " << format_double(n.x.y()) << " "
            << format_double(d == 3 ? n.x.z() : 0.0) << "\n";

    std::vector<std::vector<int>> cells;
    std::vector<int> types;
    for (const auto& el : mesh.elements) {
        if (d == 2) {
            cells.push_back(el.node_ids);
            types.push_back(7); // VTK_POLYGON
        } else {
            for (const auto& tri : triangulate_faces(mesh, el)) {
                if (tri.degenerate)
                    continue;
                cells.push_back({tri.node_ids[0], tri.node_ids[1], tri.node_ids[2]});
                types.push_back(5); // VTK_TRIANGLE
            }
        }
    }
    std::size_t list_len = 0;
    for (const auto& c : cells)
        list_len += c.size() + 1;
    out << "CELLS " << cells.size() << " " << list_len << "\n";
    for (const auto& c : cells) {
        out << c.size();
        for (int id : c)
            out << " " << id;
        out << "\n";
    }
    out << "CELL_TYPES " << cells.size() << "\n";
    for (int t : types)
        out << t << "\n";

    out << "POINT_DATA " << mesh.n_nodes() << "\nVECTORS displacement double\n";
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        for (int i = 0; i < 3; ++i)
            out << (i ? " " : "") << format_double(i < d ? u(n * d + i) : 0.0);
        out << "\n";
    }
}

void write_summary(const RunSummary& s, const std::string& path) {
    nlohmann::json j;
    j["steps"] = s.steps;
    j["newton_iterations"] = s.newton_iterations;
    j["wall_seconds"] = s.wall_seconds;
    j["max_equilibrium_gap"] = s.max_equilibrium_gap;
    nlohmann::json energy = nlohmann::json::array();
    for (const auto& e : s.energy)
        energy.push_back({{"t", e.t}, {"kinetic", e.kinetic}, {"strain", e.strain}});
    j["energy"] = energy;
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open summary file '" + path + "'", 2);
    out << j.dump(1) << "\n";
}

} // namespace polyvem
