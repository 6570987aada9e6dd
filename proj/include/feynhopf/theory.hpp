#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feynhopf/graph.hpp"
#include "feynhopf/rational.hpp"

namespace feynhopf {

struct EdgeType {
    std::string label;
    int weight = 2;          // power-counting weight of the propagator
    Rational mass2 = 1;      // propagator 1/(p^2 + m^2)
    bool scalarized = false; // stands in for a non-scalar propagator
};

struct VertexType {
    std::string label;
    std::vector<std::string> legs;  // edge-type multiset, kept sorted
    std::vector<unsigned> specs;    // allowed specification indices
    std::string coupling;
};

/// A perturbation theory: edge and vertex tables plus the physical dimension.
class Theory {
public:
    Theory() = default;
    Theory(std::string name, int dimension, std::vector<EdgeType> edges, std::vector<VertexType> vertices)
        : name_(std::move(name)), dimension_(dimension), edges_(std::move(edges)), vertices_(std::move(vertices)) {
        for (auto& v : vertices_) {
            std::sort(v.legs.begin(), v.legs.end());
            std::sort(v.specs.begin(), v.specs.end());
            v.specs.erase(std::unique(v.specs.begin(), v.specs.end()), v.specs.end());
            if (v.specs.empty()) fail(errc::invalid_argument, "vertex type '" + v.label + "' has no specification index");
            for (const auto& l : v.legs) edge(l);
        }
        for (std::size_t a = 0; a < vertices_.size(); ++a)
            for (std::size_t b = a + 1; b < vertices_.size(); ++b) {
                if (vertices_[a].label == vertices_[b].label)
                    fail(errc::invalid_argument, "duplicate vertex type '" + vertices_[a].label + "'");
                if (vertices_[a].legs == vertices_[b].legs)
                    fail(errc::invalid_argument, "vertex types '" + vertices_[a].label + "' and '" + vertices_[b].label +
                                                     "' share a residue shape");
            }
    }

    const std::string& name() const noexcept { return name_; }
    int dimension() const noexcept { return dimension_; }
    const std::vector<EdgeType>& edge_types() const noexcept { return edges_; }
    const std::vector<VertexType>& vertex_types() const noexcept { return vertices_; }

    const EdgeType& edge(const std::string& label) const {
        for (const auto& e : edges_)
            if (e.label == label) return e;
        fail(errc::unknown_edge_type, "edge type '" + label + "' not in theory " + name_);
    }

    /// Vertex type whose residue shape is `legs` (sorted), if any.
    const VertexType* by_shape(const std::vector<std::string>& legs) const {
        for (const auto& v : vertices_)
            if (v.legs == legs) return &v;
        return nullptr;
    }

    /// Graph-level vertex type string: the bare label when the type has one index, else "label:j".
    std::string type_string(const VertexType& v, unsigned spec) const {
        return v.specs.size() == 1 ? v.label : v.label + ":" + std::to_string(spec);
    }

    /// Inverse of type_string.
    std::pair<const VertexType*, unsigned> resolve(const std::string& type) const {
        auto colon = type.find(':');
        std::string label = type.substr(0, colon);
        for (const auto& v : vertices_) {
            if (v.label != label) continue;
            if (colon == std::string::npos) {
                if (v.specs.size() != 1) fail(errc::unknown_vertex_type, "vertex type '" + type + "' needs an index");
                return {&v, v.specs.front()};
            }
            unsigned j = 0;
            try {
                j = static_cast<unsigned>(std::stoul(type.substr(colon + 1)));
            } catch (const std::exception&) {
                fail(errc::unknown_vertex_type, "malformed vertex type '" + type + "'");
            }
            if (v.specs.size() == 1 || !std::binary_search(v.specs.begin(), v.specs.end(), j))
                fail(errc::unknown_vertex_type, "index " + std::to_string(j) + " not allowed for '" + label + "'");
            return {&v, j};
        }
        fail(errc::unknown_vertex_type, "vertex type '" + type + "' not in theory " + name_);
    }

private:
    std::string name_;
    int dimension_ = 4;
    std::vector<EdgeType> edges_;
    std::vector<VertexType> vertices_;
};

inline Theory preset(const std::string& name) {
    if (name == "phi3")
        return Theory("phi3", 6, {{"s", 2, 1, false}},
                      {{"v3", {"s", "s", "s"}, {0}, "g"}, {"x", {"s", "s"}, {0, 1}, "g_x"}});
    if (name == "phi4")
        return Theory("phi4", 4, {{"s", 2, 1, false}},
                      {{"v4", {"s", "s", "s", "s"}, {0}, "g"}, {"x", {"s", "s"}, {0, 1}, "g_x"}});
    if (name == "qed")
        return Theory("qed", 4, {{"f", 1, 1, true}, {"a", 2, 1, true}},
                      {{"vfa", {"a", "f", "f"}, {0}, "e"}, {"xf", {"f", "f"}, {0, 1}, "g_f"}, {"xa", {"a", "a"}, {1}, "g_a"}});
    fail(errc::unknown_theory, "no preset named '" + name + "'");
}

/// Sorted edge types of the half-edges at vertex v.
inline std::vector<std::string> star_shape(const Graph& g, std::size_t v) {
    std::vector<std::string> out;
    for (auto h : g.star(v)) out.push_back(g.halfedges()[h].type);
    std::sort(out.begin(), out.end());
    return out;
}

/// Sorted edge types of the legs of one component of the kept subgraph, i.e. its residue shape.
inline std::vector<std::string> residue_shape(const Graph& g, EdgeMask kept, const Components& comps, std::size_t c) {
    std::vector<std::string> out;
    for (std::size_t h = 0; h < g.halfedge_count(); ++h) {
        if (comps.of_vertex[g.halfedges()[h].vertex] != c) continue;
        auto p = g.pair_of(h);
        if (p == Graph::npos || !(kept >> p & 1)) out.push_back(g.halfedges()[h].type);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Every vertex has a known type whose leg multiset matches its star, every edge type is known.
inline void check_in_theory(const Theory& t, const Graph& g) {
    for (const auto& h : g.halfedges()) t.edge(h.type);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        auto [vt, j] = t.resolve(g.vertices()[v].type);
        if (vt->legs != star_shape(g, v))
            fail(errc::unknown_vertex_type, "vertex '" + g.vertices()[v].id + "' does not match the legs of type '" +
                                                g.vertices()[v].type + "'");
    }
}

/// omega = d L - sum of internal weights, over the kept edges of one component.
inline long superficial_degree(const Theory& t, const Graph& g, EdgeMask kept, const Components& comps, std::size_t c) {
    long edges = 0, weight = 0, vertices = 0;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) vertices += comps.of_vertex[v] == c;
    const auto& pairs = g.internal_pairs();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (!(kept >> p & 1) || comps.of_vertex[g.halfedges()[pairs[p].first].vertex] != c) continue;
        ++edges;
        weight += t.edge(g.halfedges()[pairs[p].first].type).weight;
    }
    return t.dimension() * (edges - vertices + 1) - weight;
}

/// Whole-graph form; g must be connected.
inline long superficial_degree(const Theory& t, const Graph& g) {
    for (const auto& h : g.halfedges()) t.edge(h.type);
    auto comps = components(g);
    if (comps.count != 1) fail(errc::invalid_argument, "superficial degree needs a connected graph");
    return superficial_degree(t, g, g.full_mask(), comps, 0);
}

/// Graph with one specification index per connected component (components() order).
struct SpecifiedGraph {
    Graph graph;
    std::vector<unsigned> spec;
};

/// Index lists per component, from the vertex type matching each component's residue.
inline std::vector<std::vector<unsigned>> allowed_specifications(const Theory& t, const Graph& g) {
    auto comps = components(g);
    std::vector<std::vector<unsigned>> out;
    for (std::size_t c = 0; c < comps.count; ++c) {
        auto shape = residue_shape(g, g.full_mask(), comps, c);
        const VertexType* vt = t.by_shape(shape);
        if (!vt) {
            std::string s;
            for (const auto& l : shape) s += (s.empty() ? "" : ",") + l;
            fail(errc::unknown_vertex_type, "no vertex type with legs [" + s + "] in theory " + t.name());
        }
        out.push_back(vt->specs);
    }
    return out;
}

inline bool is_in_theory(const Theory& t, const SpecifiedGraph& sg) {
    const Graph& g = sg.graph;
    try {
        check_in_theory(t, g);
    } catch (const error&) {
        return false;
    }
    auto comps = components(g);
    if (sg.spec.size() != comps.count || !is_locally_1pi(g)) return false;
    for (std::size_t c = 0; c < comps.count; ++c) {
        if (superficial_degree(t, g, g.full_mask(), comps, c) < 0) return false;
        const VertexType* vt = t.by_shape(residue_shape(g, g.full_mask(), comps, c));
        if (!vt || !std::binary_search(vt->specs.begin(), vt->specs.end(), sg.spec[c])) return false;
    }
    return true;
}

/// Index carried by a lone vertex viewed as a trivial subgraph component.
inline unsigned own_spec(const Theory& t, const Graph& g, std::size_t v) { return t.resolve(g.vertices()[v].type).second; }

/// A specified covering subgraph: kept pairs plus one index per component of the kept subgraph.
struct SpecifiedSubgraph {
    EdgeMask kept = 0;
    std::vector<unsigned> spec;
};

/// Specified subgraphs delta of the specified subgraph (within, within_spec) of g such that delta is
/// locally 1PI, its nontrivial components are divergent with an allowed residue vertex, and the
/// quotient within/delta stays divergent. Full components inherit the enclosing index; lone vertices
/// keep their own; other components range over the allowed list. Deterministic order.
inline std::vector<SpecifiedSubgraph> specified_subgraphs(const Theory& t, const Graph& g, EdgeMask within,
                                                          const std::vector<unsigned>& within_spec,
                                                          EnumerationLimits limits = {}) {
    if (g.internal_count() > limits.max_internal_pairs || g.internal_count() >= 64)
        fail(errc::size_limit, std::to_string(g.internal_count()) + " internal edges exceed the enumeration cap of " +
                                   std::to_string(limits.max_internal_pairs));
    const Components outer = components(g, within);
    if (within_spec.size() != outer.count)
        fail(errc::not_specified_subgraph, "expected " + std::to_string(outer.count) + " component indices");
    std::vector<long> outer_omega(outer.count);
    std::vector<std::size_t> outer_edges(outer.count, 0);
    for (std::size_t c = 0; c < outer.count; ++c) outer_omega[c] = superficial_degree(t, g, within, outer, c);
    for (std::size_t p = 0; p < g.internal_count(); ++p)
        if (within >> p & 1) ++outer_edges[outer.of_vertex[g.halfedges()[g.internal_pairs()[p].first].vertex]];

    std::vector<SpecifiedSubgraph> out;
    std::vector<std::size_t> bits;
    for (std::size_t p = 0; p < g.internal_count(); ++p)
        if (within >> p & 1) bits.push_back(p);
    const std::uint64_t end = std::uint64_t{1} << bits.size();
    for (std::uint64_t s = 0; s < end; ++s) {
        EdgeMask kept = 0;
        for (std::size_t b = 0; b < bits.size(); ++b)
            if (s >> b & 1) kept |= EdgeMask{1} << bits[b];
        if (!is_locally_1pi(g, kept)) continue;
        const Components inner = components(g, kept);
        std::vector<std::size_t> edges(inner.count, 0), size(inner.count, 0), outer_size(outer.count, 0);
        for (std::size_t p : bits)
            if (kept >> p & 1) ++edges[inner.of_vertex[g.halfedges()[g.internal_pairs()[p].first].vertex]];
        std::vector<std::size_t> parent(inner.count), rep(inner.count);
        for (std::size_t v = g.vertex_count(); v-- > 0;) {
            ++size[inner.of_vertex[v]];
            ++outer_size[outer.of_vertex[v]];
            parent[inner.of_vertex[v]] = outer.of_vertex[v];
            rep[inner.of_vertex[v]] = v;
        }
        std::vector<std::vector<unsigned>> choices(inner.count);
        std::vector<long> inner_omega(outer.count, 0);
        bool ok = true;
        for (std::size_t c = 0; c < inner.count && ok; ++c) {
            const std::size_t C = parent[c];
            if (size[c] == outer_size[C] && edges[c] == outer_edges[C]) {
                choices[c] = {within_spec[C]};
            } else if (edges[c] == 0) {
                choices[c] = {own_spec(t, g, rep[c])};
            } else {
                long w = superficial_degree(t, g, kept, inner, c);
                const VertexType* vt = t.by_shape(residue_shape(g, kept, inner, c));
                if (w < 0 || !vt) ok = false;
                else {
                    choices[c] = vt->specs;
                    inner_omega[C] += w;
                }
            }
        }
        for (std::size_t C = 0; C < outer.count && ok; ++C)
            if (outer_omega[C] - inner_omega[C] < 0) ok = false;
        if (!ok) continue;
        std::vector<std::size_t> idx(inner.count, 0);
        for (;;) {
            SpecifiedSubgraph sub{kept, {}};
            for (std::size_t c = 0; c < inner.count; ++c) sub.spec.push_back(choices[c][idx[c]]);
            out.push_back(std::move(sub));
            std::size_t c = 0;
            while (c < inner.count && ++idx[c] == choices[c].size()) idx[c++] = 0;
            if (c == inner.count) break;
        }
    }
    return out;
}

/// Gamma-bar / gamma-bar: graph-core contraction, with each new vertex typed by its component's
/// residue shape and index.
inline Contraction contract_specified(const Theory& t, const Graph& g, const SpecifiedSubgraph& sub) {
    Contraction c = contract(g, sub.kept);
    const Components comps = components(g, sub.kept);
    if (sub.spec.size() != comps.count)
        fail(errc::not_specified_subgraph, "expected " + std::to_string(comps.count) + " component indices");
    std::vector<VertexRecord> vs = c.graph.vertices();
    for (std::size_t k = 0; k < comps.count; ++k) {
        if (!c.fresh[k]) continue;
        const VertexType* vt = t.by_shape(residue_shape(g, sub.kept, comps, k));
        if (!vt) fail(errc::not_specified_subgraph, "component contracts to a vertex outside the theory");
        if (!std::binary_search(vt->specs.begin(), vt->specs.end(), sub.spec[k]))
            fail(errc::not_specified_subgraph, "index " + std::to_string(sub.spec[k]) + " not allowed for " + vt->label);
        vs[k].type = t.type_string(*vt, sub.spec[k]);
    }
    std::vector<std::size_t> sigma(c.graph.halfedge_count());
    for (std::size_t h = 0; h < sigma.size(); ++h) sigma[h] = c.graph.sigma(h);
    c.graph = Graph(std::move(vs), c.graph.halfedges(), std::move(sigma));
    return c;
}

/// Checks the full-component rule of a specified subgraph against its specified parent.
inline void check_specified_subgraph(const Theory& t, const SpecifiedGraph& sup, const SpecifiedSubgraph& sub) {
    const Graph& g = sup.graph;
    auto outer = components(g), inner = components(g, sub.kept);
    if (sub.spec.size() != inner.count) fail(errc::not_specified_subgraph, "component index count mismatch");
    for (std::size_t c = 0; c < inner.count; ++c) {
        auto members = inner.members(c);
        std::size_t C = outer.of_vertex[members.front()];
        bool full = members.size() == outer.members(C).size();
        for (std::size_t p = 0; p < g.internal_count() && full; ++p)
            if (outer.of_vertex[g.halfedges()[g.internal_pairs()[p].first].vertex] == C && !(sub.kept >> p & 1)) full = false;
        if (full && sub.spec[c] != sup.spec[C])
            fail(errc::full_component_spec_mismatch, "a full component must keep index " + std::to_string(sup.spec[C]));
        if (!full && members.size() == 1 && sub.spec[c] != own_spec(t, g, members.front())) {
            bool lone = true;
            for (std::size_t p = 0; p < g.internal_count(); ++p)
                if ((sub.kept >> p & 1) && inner.of_vertex[g.halfedges()[g.internal_pairs()[p].first].vertex] == c) lone = false;
            if (lone) fail(errc::not_specified_subgraph, "a lone vertex keeps its own index");
        }
    }
}

/// The specified contraction (Gamma/gamma, i).
inline SpecifiedGraph contract_specified(const Theory& t, const SpecifiedGraph& sup, const SpecifiedSubgraph& sub) {
    check_specified_subgraph(t, sup, sub);
    return {contract_specified(t, sup.graph, sub).graph, sup.spec};
}

/// Momenta on half-edges, one vector of the space-time dimension each.
struct MomentumConfiguration {
    std::vector<std::vector<Rational>> assignment;
};

/// Conservation at every vertex and p_e + p_sigma(e) = 0 on internal edges.
inline bool is_admissible(const Graph& g, const MomentumConfiguration& m) {
    if (m.assignment.size() != g.halfedge_count()) return false;
    const std::size_t dim = m.assignment.empty() ? 0 : m.assignment.front().size();
    for (const auto& p : m.assignment)
        if (p.size() != dim) return false;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (std::size_t k = 0; k < dim; ++k) {
            Rational s = 0;
            for (auto h : g.star(v)) s += m.assignment[h][k];
            if (!is_zero(s)) return false;
        }
    for (const auto& [a, b] : g.internal_pairs())
        for (std::size_t k = 0; k < dim; ++k)
            if (!is_zero(m.assignment[a][k] + m.assignment[b][k])) return false;
    return true;
}

}  // namespace feynhopf
