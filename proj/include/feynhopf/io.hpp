#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "feynhopf/theory.hpp"

namespace feynhopf::io {

using json = nlohmann::json;

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::parse, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(errc::parse, path + ": " + e.what());
    }
}

namespace detail {
inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(errc::parse, std::string("missing field '") + key + "'");
    return j.at(key);
}
inline std::string str(const json& j, const char* key) {
    const json& f = field(j, key);
    if (!f.is_string()) fail(errc::parse, std::string("field '") + key + "' must be a string");
    return f.get<std::string>();
}
}  // namespace detail

inline Graph graph_from_json(const json& j) {
    using detail::field;
    using detail::str;
    std::vector<VertexRecord> vs;
    for (const auto& v : field(j, "vertices")) vs.push_back({str(v, "id"), str(v, "type")});
    std::vector<std::tuple<std::string, std::string, std::string>> hs;
    for (const auto& h : field(j, "halfedges")) hs.emplace_back(str(h, "id"), str(h, "vertex"), str(h, "type"));
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& p : field(j, "sigma")) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
            fail(errc::parse, "sigma entries must be pairs of half-edge ids");
        pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    return Graph::from_ids(std::move(vs), hs, pairs);
}

inline json graph_to_json(const Graph& g) {
    json j;
    j["vertices"] = json::array();
    for (const auto& v : g.vertices()) j["vertices"].push_back({{"id", v.id}, {"type", v.type}});
    j["halfedges"] = json::array();
    for (const auto& h : g.halfedges())
        j["halfedges"].push_back({{"id", h.id}, {"vertex", g.vertices()[h.vertex].id}, {"type", h.type}});
    j["sigma"] = json::array();
    for (const auto& [a, b] : g.internal_pairs())
        j["sigma"].push_back({g.halfedges()[a].id, g.halfedges()[b].id});
    return j;
}

/// Reads the optional "spec" block {representative-vertex-id: index}. Components without an entry
/// default to the first allowed index.
inline SpecifiedGraph specified_from_json(const Theory& t, const json& j) {
    SpecifiedGraph sg{graph_from_json(j), {}};
    auto comps = components(sg.graph);
    auto allowed = allowed_specifications(t, sg.graph);
    sg.spec.assign(comps.count, 0);
    std::vector<bool> set(comps.count, false);
    if (j.contains("spec")) {
        if (!j["spec"].is_object()) fail(errc::parse, "'spec' must map vertex ids to indices");
        for (const auto& [id, value] : j["spec"].items()) {
            if (!value.is_number_unsigned()) fail(errc::parse, "specification index for '" + id + "' must be a natural");
            std::size_t c = comps.of_vertex[sg.graph.vertex_index(id)];
            if (set[c]) fail(errc::parse, "two specification entries for one component");
            sg.spec[c] = value.get<unsigned>();
            set[c] = true;
        }
    }
    for (std::size_t c = 0; c < comps.count; ++c) {
        if (!set[c]) sg.spec[c] = allowed[c].front();
        if (!std::binary_search(allowed[c].begin(), allowed[c].end(), sg.spec[c]))
            fail(errc::not_specified_subgraph, "index " + std::to_string(sg.spec[c]) + " not allowed for component " +
                                                   std::to_string(c));
    }
    return sg;
}

inline json specified_to_json(const SpecifiedGraph& sg) {
    json j = graph_to_json(sg.graph);
    auto comps = components(sg.graph);
    j["spec"] = json::object();
    for (std::size_t c = 0; c < comps.count; ++c) j["spec"][sg.graph.vertices()[comps.members(c).front()].id] = sg.spec[c];
    return j;
}

/// Theory descriptor: {"name", "dimension", "edge_types": [{"label","weight","mass2"}],
/// "vertex_types": [{"label","legs","specs","coupling"}]}.
inline Theory theory_from_json(const json& j) {
    using detail::field;
    using detail::str;
    std::vector<EdgeType> es;
    for (const auto& e : field(j, "edge_types")) {
        EdgeType et{str(e, "label"), field(e, "weight").get<int>(), 1, false};
        if (e.contains("mass2")) et.mass2 = parse_rational(e["mass2"].is_string() ? e["mass2"].get<std::string>() : e["mass2"].dump());
        if (e.contains("scalarized")) et.scalarized = e["scalarized"].get<bool>();
        es.push_back(et);
    }
    std::vector<VertexType> vs;
    for (const auto& v : field(j, "vertex_types")) {
        VertexType vt{str(v, "label"), field(v, "legs").get<std::vector<std::string>>(),
                      field(v, "specs").get<std::vector<unsigned>>(), v.value("coupling", "g")};
        vs.push_back(vt);
    }
    return Theory(str(j, "name"), field(j, "dimension").get<int>(), es, vs);
}

/// A preset name or a path to a descriptor file.
inline Theory load_theory(const std::string& name_or_path) {
    if (name_or_path == "phi3" || name_or_path == "phi4" || name_or_path == "qed") return preset(name_or_path);
    try {
        return theory_from_json(read_json_file(name_or_path));
    } catch (const json::exception& e) {
        fail(errc::parse, e.what());
    }
}

inline std::string to_dot(const Graph& g) {
    std::ostringstream os;
    os << "graph G {\n";
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        os << "  v" << v << " [label=\"" << g.vertices()[v].id << "\" type=\"" << g.vertices()[v].type << "\"];\n";
    for (const auto& [a, b] : g.internal_pairs())
        os << "  v" << g.halfedges()[a].vertex << " -- v" << g.halfedges()[b].vertex << " [label=\"" << g.halfedges()[a].id
           << "," << g.halfedges()[b].id << "\" type=\"" << g.halfedges()[a].type << "\"];\n";
    for (std::size_t h = 0; h < g.halfedge_count(); ++h)
        if (g.is_external(h)) {
            os << "  x" << h << " [shape=point];\n";
            os << "  v" << g.halfedges()[h].vertex << " -- x" << h << " [label=\"" << g.halfedges()[h].id << "\" type=\""
               << g.halfedges()[h].type << "\"];\n";
        }
    os << "}\n";
    return os.str();
}

}  // namespace feynhopf::io
