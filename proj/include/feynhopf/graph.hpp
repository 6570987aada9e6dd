#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "feynhopf/canonical.hpp"
#include "feynhopf/error.hpp"

namespace feynhopf {

struct VertexRecord {
    std::string id;
    std::string type;
};

struct HalfEdgeRecord {
    std::string id;
    std::size_t vertex = 0;
    std::string type;
};

/// Subset of the internal edges of a graph; bit p selects internal pair p.
using EdgeMask = std::uint64_t;

/// Vertex type given to vertices produced by contraction until a theory resolves them.
inline const std::string placeholder_vertex_type = "*";

/// Feynman graph in half-edge form: vertices, half-edges, the incidence map and the
/// involution sigma. Fixed points of sigma are external legs, 2-cycles internal edges.
/// Values are immutable once constructed and always valid.
class Graph {
public:
    Graph() = default;

    /// Throws InvolutionError, TypeMismatch or DanglingHalfEdge.
    Graph(std::vector<VertexRecord> vertices, std::vector<HalfEdgeRecord> halfedges, std::vector<std::size_t> sigma)
        : vertices_(std::move(vertices)), halfedges_(std::move(halfedges)), sigma_(std::move(sigma)) {
        check();
        index();
    }

    /// Builds from identifiers as they appear in the JSON format: each half-edge names its
    /// vertex, `pairs` lists the internal edges, everything else is external.
    static Graph from_ids(std::vector<VertexRecord> vertices,
                          const std::vector<std::tuple<std::string, std::string, std::string>>& halfedges,
                          const std::vector<std::pair<std::string, std::string>>& pairs) {
        std::map<std::string, std::size_t> vid;
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (!vid.emplace(vertices[i].id, i).second) fail(errc::parse, "duplicate vertex id '" + vertices[i].id + "'");
        std::vector<HalfEdgeRecord> hs;
        std::map<std::string, std::size_t> hid;
        for (const auto& [id, v, type] : halfedges) {
            auto it = vid.find(v);
            if (it == vid.end()) fail(errc::dangling_halfedge, "half-edge '" + id + "' attached to unknown vertex '" + v + "'");
            if (!hid.emplace(id, hs.size()).second) fail(errc::parse, "duplicate half-edge id '" + id + "'");
            hs.push_back({id, it->second, type});
        }
        std::vector<std::size_t> sigma(hs.size());
        std::iota(sigma.begin(), sigma.end(), std::size_t{0});
        std::vector<bool> used(hs.size(), false);
        for (const auto& [a, b] : pairs) {
            auto ia = hid.find(a), ib = hid.find(b);
            if (ia == hid.end() || ib == hid.end()) fail(errc::parse, "sigma references unknown half-edge '" + (ia == hid.end() ? a : b) + "'");
            if (ia->second == ib->second || used[ia->second] || used[ib->second])
                fail(errc::involution, "half-edge listed in more than one sigma pair ('" + a + "', '" + b + "')");
            used[ia->second] = used[ib->second] = true;
            sigma[ia->second] = ib->second;
            sigma[ib->second] = ia->second;
        }
        return Graph(std::move(vertices), std::move(hs), std::move(sigma));
    }

    const std::vector<VertexRecord>& vertices() const noexcept { return vertices_; }
    const std::vector<HalfEdgeRecord>& halfedges() const noexcept { return halfedges_; }
    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t halfedge_count() const noexcept { return halfedges_.size(); }
    std::size_t sigma(std::size_t h) const { return sigma_.at(h); }
    bool is_external(std::size_t h) const { return sigma_.at(h) == h; }

    /// Internal edges as (h, sigma(h)) with h < sigma(h), ordered by h.
    const std::vector<std::pair<std::size_t, std::size_t>>& internal_pairs() const noexcept { return pairs_; }
    std::size_t internal_count() const noexcept { return pairs_.size(); }
    const std::vector<std::size_t>& star(std::size_t v) const { return star_.at(v); }

    std::size_t vertex_index(const std::string& id) const {
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (vertices_[i].id == id) return i;
        fail(errc::invalid_argument, "no vertex '" + id + "'");
    }
    std::size_t halfedge_index(const std::string& id) const {
        for (std::size_t i = 0; i < halfedges_.size(); ++i)
            if (halfedges_[i].id == id) return i;
        fail(errc::invalid_argument, "no half-edge '" + id + "'");
    }
    /// Internal pair index containing half-edge h, or npos for external legs.
    std::size_t pair_of(std::size_t h) const { return pair_of_.at(h); }
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    EdgeMask full_mask() const noexcept {
        return pairs_.size() >= 64 ? ~EdgeMask{0} : ((EdgeMask{1} << pairs_.size()) - 1);
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        if (a.sigma_ != b.sigma_ || a.vertices_.size() != b.vertices_.size() || a.halfedges_.size() != b.halfedges_.size())
            return false;
        for (std::size_t i = 0; i < a.vertices_.size(); ++i)
            if (a.vertices_[i].id != b.vertices_[i].id || a.vertices_[i].type != b.vertices_[i].type) return false;
        for (std::size_t i = 0; i < a.halfedges_.size(); ++i)
            if (a.halfedges_[i].id != b.halfedges_[i].id || a.halfedges_[i].vertex != b.halfedges_[i].vertex ||
                a.halfedges_[i].type != b.halfedges_[i].type)
                return false;
        return true;
    }

private:
    void check() const {
        const std::size_t n = halfedges_.size();
        if (sigma_.size() != n) fail(errc::involution, "sigma must be defined on every half-edge");
        for (std::size_t h = 0; h < n; ++h) {
            if (halfedges_[h].vertex >= vertices_.size())
                fail(errc::dangling_halfedge, "half-edge '" + halfedges_[h].id + "' has no vertex");
            if (sigma_[h] >= n || sigma_[sigma_[h]] != h)
                fail(errc::involution, "sigma(sigma(" + halfedges_[h].id + ")) != " + halfedges_[h].id);
            if (halfedges_[sigma_[h]].type != halfedges_[h].type)
                fail(errc::type_mismatch, "sigma pairs '" + halfedges_[h].id + "' (" + halfedges_[h].type + ") with '" +
                                              halfedges_[sigma_[h]].id + "' (" + halfedges_[sigma_[h]].type + ")");
        }
        std::set<std::string> ids;
        for (const auto& v : vertices_)
            if (!ids.insert(v.id).second) fail(errc::parse, "duplicate vertex id '" + v.id + "'");
        ids.clear();
        for (const auto& h : halfedges_)
            if (!ids.insert(h.id).second) fail(errc::parse, "duplicate half-edge id '" + h.id + "'");
    }

    void index() {
        star_.assign(vertices_.size(), {});
        pair_of_.assign(halfedges_.size(), npos);
        for (std::size_t h = 0; h < halfedges_.size(); ++h) {
            star_[halfedges_[h].vertex].push_back(h);
            if (sigma_[h] > h) {
                pair_of_[h] = pair_of_[sigma_[h]] = pairs_.size();
                pairs_.emplace_back(h, sigma_[h]);
            }
        }
    }

    std::vector<VertexRecord> vertices_;
    std::vector<HalfEdgeRecord> halfedges_;
    std::vector<std::size_t> sigma_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::vector<std::vector<std::size_t>> star_;
    std::vector<std::size_t> pair_of_;
};

/// Explicit validation entry point. Construction already enforces the invariants, so this
/// only re-runs them on a copy (useful when records were assembled by hand).
inline void validate(const std::vector<VertexRecord>& vertices, const std::vector<HalfEdgeRecord>& halfedges,
                     const std::vector<std::size_t>& sigma) {
    Graph(vertices, halfedges, sigma);
}

namespace detail {
struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
    std::vector<std::size_t> parent;
};
}  // namespace detail

/// Connected components of the subgraph keeping the pairs in `kept`: one label per vertex,
/// labels numbered 0.. in order of each component's lowest vertex.
struct Components {
    std::vector<std::size_t> of_vertex;
    std::size_t count = 0;

    std::vector<std::size_t> members(std::size_t c) const {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < of_vertex.size(); ++v)
            if (of_vertex[v] == c) out.push_back(v);
        return out;
    }
};

inline Components components(const Graph& g, EdgeMask kept) {
    detail::UnionFind uf(g.vertex_count());
    const auto& pairs = g.internal_pairs();
    for (std::size_t p = 0; p < pairs.size(); ++p)
        if (kept >> p & 1) uf.unite(g.halfedges()[pairs[p].first].vertex, g.halfedges()[pairs[p].second].vertex);
    Components out;
    out.of_vertex.assign(g.vertex_count(), 0);
    std::map<std::size_t, std::size_t> label;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        auto [it, fresh] = label.emplace(uf.find(v), out.count);
        if (fresh) ++out.count;
        out.of_vertex[v] = it->second;
    }
    return out;
}

inline Components components(const Graph& g) { return components(g, g.full_mask()); }

/// L = |I| - |V| + |pi_0|.
inline long loop_number(const Graph& g, EdgeMask kept) {
    long internal = 0;
    for (std::size_t p = 0; p < g.internal_count(); ++p) internal += (kept >> p & 1) ? 1 : 0;
    return internal - static_cast<long>(g.vertex_count()) + static_cast<long>(components(g, kept).count);
}

inline long loop_number(const Graph& g) { return loop_number(g, g.full_mask()); }

inline bool is_connected(const Graph& g, EdgeMask kept) { return components(g, kept).count <= 1; }
inline bool is_connected(const Graph& g) { return is_connected(g, g.full_mask()); }

/// Internal pairs (among `kept`) whose removal disconnects their component.
/// Lowlink DFS over pair indices, so parallel edges and self-loops are handled.
inline std::vector<std::size_t> bridges(const Graph& g, EdgeMask kept) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);  // (neighbour, pair)
    const auto& pairs = g.internal_pairs();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        if (!(kept >> p & 1)) continue;
        auto u = g.halfedges()[pairs[p].first].vertex, v = g.halfedges()[pairs[p].second].vertex;
        adj[u].emplace_back(v, p);
        if (u != v) adj[v].emplace_back(u, p);
    }
    std::vector<long> disc(n, -1), low(n, 0);
    std::vector<std::size_t> out;
    long timer = 0;
    std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t v, std::size_t via) {
        disc[v] = low[v] = timer++;
        for (const auto& [w, p] : adj[v]) {
            if (p == via) continue;
            if (disc[w] < 0) {
                dfs(w, p);
                low[v] = std::min(low[v], low[w]);
                if (low[w] > disc[v]) out.push_back(p);
            } else {
                low[v] = std::min(low[v], disc[w]);
            }
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (disc[v] < 0) dfs(v, Graph::npos);
    std::sort(out.begin(), out.end());
    return out;
}

/// Every component of the kept subgraph is bridgeless (a single vertex counts as 1PI).
inline bool is_locally_1pi(const Graph& g, EdgeMask kept) { return bridges(g, kept).empty(); }
inline bool is_locally_1pi(const Graph& g) { return is_locally_1pi(g, g.full_mask()); }

/// Connected and no internal bridge.
inline bool is_1pi(const Graph& g, EdgeMask kept) { return is_connected(g, kept) && is_locally_1pi(g, kept); }
inline bool is_1pi(const Graph& g) { return is_1pi(g, g.full_mask()); }

/// A covering subgraph: same vertices and half-edges, internal pairs outside `kept` cut
/// into two external legs. Stored lazily; `realize` materializes it.
struct CoveringSubgraph {
    const Graph* parent = nullptr;
    EdgeMask kept = 0;

    Graph realize() const {
        std::vector<std::size_t> sigma(parent->halfedge_count());
        for (std::size_t h = 0; h < sigma.size(); ++h) {
            auto p = parent->pair_of(h);
            sigma[h] = (p != Graph::npos && (kept >> p & 1)) ? parent->sigma(h) : h;
        }
        return Graph(parent->vertices(), parent->halfedges(), std::move(sigma));
    }
};

struct EnumerationLimits {
    std::size_t max_internal_pairs = 20;
};

/// All covering subgraphs passing `filter`, in increasing kept-mask order.
inline std::vector<CoveringSubgraph> covering_subgraphs(const Graph& g,
                                                        const std::function<bool(const CoveringSubgraph&)>& filter,
                                                        EnumerationLimits limits = {}) {
    if (g.internal_count() > limits.max_internal_pairs || g.internal_count() >= 64)
        fail(errc::size_limit, std::to_string(g.internal_count()) + " internal edges exceed the enumeration cap of " +
                                   std::to_string(limits.max_internal_pairs));
    std::vector<CoveringSubgraph> out;
    const EdgeMask end = EdgeMask{1} << g.internal_count();
    for (EdgeMask m = 0; m < end; ++m) {
        CoveringSubgraph s{&g, m};
        if (!filter || filter(s)) out.push_back(s);
    }
    return out;
}

struct Contraction {
    Graph graph;
    std::vector<std::size_t> vertex_map;  // old vertex -> new vertex
    std::vector<std::size_t> pair_map;    // new internal pair -> old internal pair
    std::vector<bool> fresh;              // new vertex came from a nontrivial component
};

/// Shrinks every connected component of the kept subgraph to one vertex. Half-edges inside
/// kept pairs disappear, the others keep their identity. Trivial components (a lone vertex
/// with no kept edge) keep their id and type; other new vertices get the placeholder type.
inline Contraction contract(const Graph& g, EdgeMask kept) {
    if (g.internal_count() < 64 && (kept & ~g.full_mask()) != 0)
        fail(errc::not_a_subgraph, "kept mask selects internal edges the graph does not have");
    Components comps = components(g, kept);
    std::vector<bool> nontrivial(comps.count, false);
    for (std::size_t p = 0; p < g.internal_count(); ++p)
        if (kept >> p & 1) nontrivial[comps.of_vertex[g.halfedges()[g.internal_pairs()[p].first].vertex]] = true;
    std::vector<VertexRecord> vs(comps.count);
    for (std::size_t c = 0; c < comps.count; ++c) {
        auto members = comps.members(c);
        if (!nontrivial[c]) {
            vs[c] = g.vertices()[members.front()];
        } else {
            std::string id;
            for (auto v : members) id += (id.empty() ? "" : "+") + g.vertices()[v].id;
            vs[c] = {id, placeholder_vertex_type};
        }
    }
    std::vector<HalfEdgeRecord> hs;
    std::vector<std::size_t> new_index(g.halfedge_count(), Graph::npos);
    for (std::size_t h = 0; h < g.halfedge_count(); ++h) {
        auto p = g.pair_of(h);
        if (p != Graph::npos && (kept >> p & 1)) continue;
        new_index[h] = hs.size();
        const auto& rec = g.halfedges()[h];
        hs.push_back({rec.id, comps.of_vertex[rec.vertex], rec.type});
    }
    std::vector<std::size_t> sigma(hs.size());
    for (std::size_t h = 0; h < g.halfedge_count(); ++h)
        if (new_index[h] != Graph::npos) sigma[new_index[h]] = new_index[g.sigma(h)];
    Contraction out{Graph(std::move(vs), std::move(hs), std::move(sigma)), comps.of_vertex, {}, nontrivial};
    for (const auto& [a, b] : out.graph.internal_pairs()) out.pair_map.push_back(g.pair_of(g.halfedge_index(out.graph.halfedges()[a].id)));
    return out;
}

inline Contraction contract(const Graph& g, const CoveringSubgraph& s) {
    if (s.parent != &g && !(s.parent && *s.parent == g))
        fail(errc::not_a_subgraph, "covering subgraph belongs to a different graph");
    return contract(g, s.kept);
}

/// Gamma/Gamma: one vertex per component carrying its external legs.
inline Graph residue(const Graph& g) { return contract(g, g.full_mask()).graph; }

/// All internal edges cut.
inline Graph skeleton(const Graph& g) { return CoveringSubgraph{&g, 0}.realize(); }

/// One component of the kept subgraph as a standalone graph: kept pairs stay internal, every
/// other half-edge at its vertices becomes external. Records the parent index of each vertex
/// and of each surviving internal pair.
struct Piece {
    Graph graph;
    std::vector<std::size_t> vertices;
    std::vector<std::size_t> pairs;
};

inline Piece extract(const Graph& g, EdgeMask kept, const Components& comps, std::size_t c) {
    Piece out;
    std::vector<std::size_t> vmap(g.vertex_count(), Graph::npos);
    std::vector<VertexRecord> vs;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        if (comps.of_vertex[v] == c) {
            vmap[v] = vs.size();
            vs.push_back(g.vertices()[v]);
            out.vertices.push_back(v);
        }
    std::vector<HalfEdgeRecord> hs;
    std::vector<std::size_t> hmap(g.halfedge_count(), Graph::npos);
    for (std::size_t h = 0; h < g.halfedge_count(); ++h)
        if (vmap[g.halfedges()[h].vertex] != Graph::npos) {
            hmap[h] = hs.size();
            hs.push_back({g.halfedges()[h].id, vmap[g.halfedges()[h].vertex], g.halfedges()[h].type});
        }
    std::vector<std::size_t> sigma(hs.size());
    for (std::size_t h = 0; h < g.halfedge_count(); ++h) {
        if (hmap[h] == Graph::npos) continue;
        auto p = g.pair_of(h);
        sigma[hmap[h]] = (p != Graph::npos && (kept >> p & 1)) ? hmap[g.sigma(h)] : hmap[h];
    }
    out.graph = Graph(std::move(vs), std::move(hs), std::move(sigma));
    for (const auto& [a, b] : out.graph.internal_pairs()) {
        (void)b;
        for (std::size_t h = 0; h < g.halfedge_count(); ++h)
            if (hmap[h] == a) out.pairs.push_back(g.pair_of(h));
    }
    return out;
}

inline Graph component_graph(const Graph& g, EdgeMask kept, const Components& comps, std::size_t c) {
    return extract(g, kept, comps, c).graph;
}

/// Labelled multigraph view used for canonical keys; extra vertex/edge decorations let the
/// algebra layer encode specifications and subgraph membership.
inline LabeledMultigraph labeled_view(const Graph& g, const std::vector<std::string>& vertex_extra = {},
                                      EdgeMask marked = 0) {
    LabeledMultigraph m;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        m.vertex_labels.push_back(g.vertices()[v].type + (vertex_extra.empty() ? "" : "|" + vertex_extra[v]));
    const auto& pairs = g.internal_pairs();
    for (std::size_t p = 0; p < pairs.size(); ++p)
        m.edges.emplace_back(g.halfedges()[pairs[p].first].vertex, g.halfedges()[pairs[p].second].vertex,
                             g.halfedges()[pairs[p].first].type + ((marked >> p & 1) ? "+" : ""));
    for (std::size_t h = 0; h < g.halfedge_count(); ++h)
        if (g.is_external(h)) m.legs.emplace_back(g.halfedges()[h].vertex, g.halfedges()[h].type);
    return m;
}

/// Isomorphism-invariant key of a typed half-edge graph.
struct CanonicalKey {
    std::string canonical;
    friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

inline CanonicalKey canonical_key(const Graph& g) { return {canonical_form(labeled_view(g))}; }

}  // namespace feynhopf
