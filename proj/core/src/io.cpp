#include "cubeknot/io.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace cubeknot {

using nlohmann::json;

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp);
        out << content;
        if (!out) throw InputError("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw InputError("cannot rename into " + path);
}

void write_obj_mesh(const std::string& path, const TriMesh& mesh) {
    std::ostringstream out;
    out.precision(12);
    for (const auto& v : mesh.vertices) out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    write_text_atomic(path, out.str());
}

void write_obj_cells(const std::string& path, const std::vector<CellKey>& cells, Scale s) {
    std::ostringstream out;
    out.precision(12);
    std::ostringstream elems;
    int next_vertex = 1;
    for (const CellKey& c : cells) {
        const Box b = cell_support(c, s);
        if (c.dim() == 2) {
            int u = -1, v = -1;
            for (int i = 0; i < 3; ++i)
                if (c.spans(i)) (u < 0 ? u : v) = i;
            std::array<double, 3> p{b.lo[0], b.lo[1], b.lo[2]};
            auto emit = [&](double du, double dv) {
                std::array<double, 3> q = p;
                q[u] += du * (b.hi[u] - b.lo[u]);
                q[v] += dv * (b.hi[v] - b.lo[v]);
                out << "v " << q[0] << ' ' << q[1] << ' ' << q[2] << '\n';
            };
            emit(0, 0);
            emit(1, 0);
            emit(1, 1);
            emit(0, 1);
            elems << "f " << next_vertex << ' ' << next_vertex + 1 << ' ' << next_vertex + 2 << ' '
                  << next_vertex + 3 << '\n';
            next_vertex += 4;
        } else if (c.dim() == 1) {
            out << "v " << b.lo[0] << ' ' << b.lo[1] << ' ' << b.lo[2] << '\n';
            out << "v " << b.hi[0] << ' ' << b.hi[1] << ' ' << b.hi[2] << '\n';
            elems << "l " << next_vertex << ' ' << next_vertex + 1 << '\n';
            next_vertex += 2;
        } else {
            throw InputError("write_obj_cells: only squares and edges supported");
        }
    }
    write_text_atomic(path, out.str() + elems.str());
}

void write_obj_polyline(const std::string& path, const std::vector<Eigen::Vector3d>& points, bool closed) {
    std::ostringstream out;
    out.precision(12);
    for (const auto& p : points) out << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    out << "l";
    for (std::size_t i = 1; i <= points.size(); ++i) out << ' ' << i;
    if (closed && !points.empty()) out << " 1";
    out << '\n';
    write_text_atomic(path, out.str());
}

std::string cycle_json(const LatticeCycle& cycle) {
    json j;
    j["m"] = cycle.scale.m;
    json verts = json::array();
    for (const auto& v : cycle.vertices) verts.push_back({v[0], v[1], v[2]});
    j["vertices"] = std::move(verts);
    return j.dump() + "\n";
}

void write_cycle_json(const std::string& path, const LatticeCycle& cycle) {
    write_text_atomic(path, cycle_json(cycle));
}

LatticeCycle read_cycle_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open cycle file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("malformed cycle JSON in " + path + ": " + e.what());
    }
    LatticeCycle cycle;
    try {
        cycle.scale.m = j.at("m").get<int>();
        for (const auto& v : j.at("vertices")) {
            if (!v.is_array() || v.size() != 3) throw InputError("cycle vertex is not a triple");
            GridVec g{};
            for (int i = 0; i < 3; ++i) g[i] = v[i].get<std::int32_t>();
            cycle.vertices.push_back(g);
        }
    } catch (const json::exception& e) {
        throw InputError("bad cycle schema in " + path + ": " + e.what());
    }
    if (cycle.scale.m < 1) throw InputError("cycle scale must be >= 1");
    try {
        validate_cycle(cycle);
    } catch (const InvariantError& e) {
        throw InputError(std::string("cycle file does not hold a valid lattice cycle: ") + e.what());
    }
    return cycle;
}

std::string cubeset_json(const CubeSet& set) {
    json j;
    j["m"] = set.scale.m;
    json cubes = json::array();
    for (const auto& c : set.cubes) cubes.push_back({c.anchor[0], c.anchor[1], c.anchor[2]});
    j["cubes"] = std::move(cubes);
    return j.dump() + "\n";
}

} // namespace cubeknot
