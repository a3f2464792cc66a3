#include "reap/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace reap {

using nlohmann::json;

json coloring_to_json(const Coloring& col) {
    return json{{"i", col.shape.branching},
                {"h", col.shape.depth},
                {"j", col.colors},
                {"leaves", col.leaf_colors}};
}

Coloring coloring_from_json(const json& j) {
    if (!j.is_object() || !j.contains("i") || !j.contains("h") || !j.contains("j") ||
        !j.contains("leaves"))
        throw std::invalid_argument("colouring record needs fields i, h, j, leaves");
    Coloring col;
    col.shape = TreeShape(j.at("i").get<int>(), j.at("h").get<int>());
    col.colors = j.at("j").get<int>();
    col.leaf_colors = j.at("leaves").get<std::vector<int>>();
    col.validate();
    return col;
}

json pol_matrix_to_json(const PolMatrix& mat) {
    return json{{"n", mat.rows}, {"m", mat.cols}, {"k", mat.colors}, {"entries", mat.entries}};
}

PolMatrix pol_matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("m") || !j.contains("k") ||
        !j.contains("entries"))
        throw std::invalid_argument("matrix record needs fields n, m, k, entries");
    PolMatrix mat;
    mat.rows = j.at("n").get<int>();
    mat.cols = j.at("m").get<int>();
    mat.colors = j.at("k").get<int>();
    mat.entries = j.at("entries").get<std::vector<int>>();
    mat.validate();
    return mat;
}

json verdict_to_json(const PropertyQuery& query, const Verdict& v) {
    json out{{"query", {{"i", query.i}, {"j", query.j}, {"k", query.k}, {"m", query.m}}},
             {"trace", v.trace},
             {"nodes_explored", v.nodes_explored}};
    switch (v.kind) {
        case Verdict::Kind::Fails:
            out["verdict"] = "fails";
            out["depth"] = v.depth;
            out["vacuous"] = v.vacuous;
            if (v.witness) out["witness"] = coloring_to_json(*v.witness);
            break;
        case Verdict::Kind::Holds: {
            out["verdict"] = "holds";
            const char* reason = "";
            switch (v.reason) {
                case Verdict::HoldsReason::TrivialColors: reason = "trivial_colors"; break;
                case Verdict::HoldsReason::PigeonholeArithmetic:
                    reason = "pigeonhole_arithmetic";
                    break;
                case Verdict::HoldsReason::Axiom: reason = "axiom"; break;
                case Verdict::HoldsReason::SmallTreeExhaustion:
                    reason = "small_tree_exhaustion";
                    break;
            }
            out["reason"] = reason;
            if (!v.citation.empty()) out["citation"] = v.citation;
            break;
        }
        case Verdict::Kind::Unknown:
            out["verdict"] = "unknown";
            out["max_depth_searched"] = v.max_depth_searched;
            break;
    }
    return out;
}

std::string content_id(const json& j) {
    std::string dump = j.dump();
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : dump) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << hash;
    return os.str();
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace reap
