#include "polyvem/mesh_io.hpp"
#include "polyvem/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace polyvem {

using nlohmann::json;

namespace {

json mesh_to_json(const Mesh& mesh) {
    json j;
    j["dimension"] = mesh.dimension;
    json nodes = json::array();
    for (const auto& n : mesh.nodes) {
        json coords = json::array();
        for (int a = 0; a < mesh.dimension; ++a)
            coords.push_back(n.x(a));
        nodes.push_back(coords);
    }
    j["nodes"] = nodes;

    json elements = json::array();
    for (const auto& el : mesh.elements) {
        if (mesh.dimension == 2) {
            elements.push_back(el.node_ids);
        } else {
            json o;
            o["nodes"] = el.node_ids;
            o["faces"] = el.faces;
            if (el.tag != 0)
                o["tag"] = el.tag;
            elements.push_back(o);
        }
    }
    j["elements"] = elements;

    json sets = json::object();
    for (const auto& [name, set] : mesh.boundary_sets) {
        json s;
        s["nodes"] = set.nodes;
        s["facets"] = set.facets;
        sets[name] = s;
    }
    j["boundary_sets"] = sets;
    return j;
}

Mesh mesh_from_json(const json& j, const std::string& origin) {
    Mesh mesh;
    try {
        mesh.dimension = j.at("dimension").get<int>();
        if (mesh.dimension != 2 && mesh.dimension != 3)
            throw ParseError(origin + ": dimension must be 2 or 3");
        int id = 0;
        for (const auto& coords : j.at("nodes")) {
            if (static_cast<int>(coords.size()) != mesh.dimension)
                throw ParseError(origin + ": node " + std::to_string(id) + " has " +
                                 std::to_string(coords.size()) + " coordinates");
            Eigen::Vector3d x = Eigen::Vector3d::Zero();
            for (int a = 0; a < mesh.dimension; ++a)
                x(a) = coords.at(static_cast<std::size_t>(a)).get<double>();
            mesh.nodes.push_back({id++, x});
        }
        for (const auto& e : j.at("elements")) {
            PolytopalElement el;
            if (mesh.dimension == 2) {
                el.node_ids = e.get<std::vector<int>>();
            } else {
                el.node_ids = e.at("nodes").get<std::vector<int>>();
                el.faces = e.at("faces").get<std::vector<std::vector<int>>>();
                el.tag = e.value("tag", 0);
            }
            mesh.elements.push_back(std::move(el));
        }
        if (j.contains("boundary_sets")) {
            for (const auto& [name, s] : j.at("boundary_sets").items()) {
                BoundarySet set;
                if (s.contains("nodes"))
                    set.nodes = s.at("nodes").get<std::vector<int>>();
                if (s.contains("facets"))
                    set.facets = s.at("facets").get<std::vector<std::vector<int>>>();
                mesh.boundary_sets[name] = std::move(set);
            }
        }
    } catch (const json::exception& ex) {
        throw ParseError(origin + ": " + ex.what());
    }
    mesh.validate();
    return mesh;
}

} // namespace

Mesh read_mesh(std::istream& in, const std::string& origin) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw ParseError(origin + ": " + ex.what());
    }
    return mesh_from_json(j, origin);
}

Mesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open mesh file '" + path + "'");
    return read_mesh(in, path);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
    out << mesh_to_json(mesh).dump(1) << "\n";
}

void save_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open '" + path + "' for writing");
    write_mesh(mesh, out);
}

} // namespace polyvem
