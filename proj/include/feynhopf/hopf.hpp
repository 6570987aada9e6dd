#pragma once

#include <map>
#include <string>
#include <vector>

#include "feynhopf/algebra.hpp"
#include "feynhopf/theory.hpp"

namespace feynhopf {

/// Connected specified graph (Gamma, i): a generator of the graph algebra.
struct GraphGenerator {
    Graph graph;
    unsigned spec = 0;
};

/// Pair (Gamma-bar, gamma-bar) with connected Gamma: a generator of the doubled algebra.
struct PairGenerator {
    Graph outer;
    unsigned spec = 0;
    SpecifiedSubgraph inner;
};

inline std::string key(const GraphGenerator& g) {
    return "H" + std::to_string(g.spec) + "|" + canonical_form(labeled_view(g.graph));
}

/// Per-vertex index of the inner component containing it.
inline std::vector<std::string> inner_labels(const Graph& g, const SpecifiedSubgraph& s) {
    auto comps = components(g, s.kept);
    std::vector<std::string> out;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) out.push_back(std::to_string(s.spec.at(comps.of_vertex[v])));
    return out;
}

inline std::string key(const PairGenerator& p) {
    return "D" + std::to_string(p.spec) + "|" + canonical_form(labeled_view(p.outer, inner_labels(p.outer, p.inner), p.inner.kept));
}

inline long grade(const GraphGenerator& g) { return loop_number(g.graph); }
inline long grade(const PairGenerator& p) { return loop_number(p.outer, p.inner.kept); }

/// Indices on the components of `after` (a contraction of `before`), read off through the vertex map.
inline std::vector<unsigned> pull_spec(const std::vector<std::size_t>& vertex_map, const Components& after,
                                       const Components& before, const std::vector<unsigned>& spec) {
    std::vector<unsigned> out(after.count, 0);
    for (std::size_t v = vertex_map.size(); v-- > 0;) out[after.of_vertex[vertex_map[v]]] = spec.at(before.of_vertex[v]);
    return out;
}

inline std::vector<GraphGenerator> split(const SpecifiedGraph& sg) {
    auto comps = components(sg.graph);
    if (sg.spec.size() != comps.count) fail(errc::not_specified_subgraph, "one index per component expected");
    std::vector<GraphGenerator> out;
    for (std::size_t c = 0; c < comps.count; ++c) out.push_back({extract(sg.graph, sg.graph.full_mask(), comps, c).graph, sg.spec[c]});
    return out;
}

/// Connected generators of a pair whose outer graph may be disconnected.
inline std::vector<PairGenerator> split(const SpecifiedGraph& outer, const SpecifiedSubgraph& inner) {
    const Graph& g = outer.graph;
    auto comps = components(g), inner_comps = components(g, inner.kept);
    if (outer.spec.size() != comps.count || inner.spec.size() != inner_comps.count)
        fail(errc::not_specified_subgraph, "one index per component expected");
    std::vector<PairGenerator> out;
    for (std::size_t c = 0; c < comps.count; ++c) {
        Piece piece = extract(g, g.full_mask(), comps, c);
        SpecifiedSubgraph sub;
        for (std::size_t q = 0; q < piece.pairs.size(); ++q)
            if (inner.kept >> piece.pairs[q] & 1) sub.kept |= EdgeMask{1} << q;
        auto local = components(piece.graph, sub.kept);
        sub.spec.assign(local.count, 0);
        for (std::size_t v = 0; v < piece.vertices.size(); ++v)
            sub.spec[local.of_vertex[v]] = inner.spec[inner_comps.of_vertex[piece.vertices[v]]];
        out.push_back({std::move(piece.graph), outer.spec[c], std::move(sub)});
    }
    return out;
}

/// Generators met so far, by key. Any representative stands for its isomorphism class.
template <class Gen>
class Registry {
public:
    const std::string& intern(const Gen& g) {
        auto k = key(g);
        auto it = gens_.find(k);
        if (it == gens_.end()) it = gens_.emplace(std::move(k), g).first;
        return it->first;
    }
    const Gen& at(const std::string& k) const {
        auto it = gens_.find(k);
        if (it == gens_.end()) fail(errc::invalid_argument, "unknown generator " + k);
        return it->second;
    }
    std::size_t size() const noexcept { return gens_.size(); }

private:
    std::map<std::string, Gen> gens_;
};

/// Free commutative algebra on connected specified graphs with the subgraph coproduct.
class GraphHopf {
public:
    explicit GraphHopf(Theory t) : theory_(std::move(t)) {}

    const Theory& theory() const noexcept { return theory_; }
    const Registry<GraphGenerator>& registry() const noexcept { return reg_; }

    Monomial monomial(const SpecifiedGraph& sg) {
        Monomial m;
        for (const auto& g : split(sg)) m.push_back(reg_.intern(g));
        std::sort(m.begin(), m.end());
        return m;
    }

    /// Sum of gamma ⊗ Gamma/gamma over specified covering subgraphs, enumerated on the graph itself.
    Tensor coproduct(const SpecifiedGraph& sg) {
        Tensor out;
        const Graph& g = sg.graph;
        auto comps = components(g);
        for (const auto& sub : specified_subgraphs(theory_, g, g.full_mask(), sg.spec)) {
            Monomial left;
            auto inner = components(g, sub.kept);
            for (std::size_t c = 0; c < inner.count; ++c)
                left.push_back(reg_.intern({extract(g, sub.kept, inner, c).graph, sub.spec[c]}));
            std::sort(left.begin(), left.end());
            Contraction q = contract_specified(theory_, g, sub);
            auto after = components(q.graph);
            out.add({left, monomial({q.graph, pull_spec(q.vertex_map, after, comps, sg.spec)})}, 1);
        }
        return out;
    }

    Tensor coproduct(const std::string& k) {
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
        const auto& gen = reg_.at(k);
        Tensor t = coproduct(SpecifiedGraph{gen.graph, {gen.spec}});
        return memo_.emplace(k, std::move(t)).first->second;
    }

    Tensor coproduct(const Monomial& m) {
        Tensor out({Monomial{}, Monomial{}}, 1);
        for (const auto& k : m) out = out * coproduct(k);
        return out;
    }

    long grade(const std::string& k) const { return feynhopf::grade(reg_.at(k)); }
    long grade(const Monomial& m) const {
        long s = 0;
        for (const auto& k : m) s += grade(k);
        return s;
    }

    /// Residues (degree-zero generators) are identified with the unit in the quotient.
    bool is_unit(const std::string& k) const { return grade(k) == 0; }

    Element quotient(const Element& x) const {
        return feynhopf::quotient(x, [&](const std::string& k) { return is_unit(k); });
    }
    Tensor quotient(const Tensor& x) const {
        return feynhopf::quotient(x, [&](const std::string& k) { return is_unit(k); });
    }

    /// Coproduct of the quotient algebra, on a monomial already free of residues.
    Tensor reduced_coproduct(const Monomial& m) { return quotient(coproduct(m)); }

private:
    Theory theory_;
    Registry<GraphGenerator> reg_;
    std::map<std::string, Tensor> memo_;
};

/// Free commutative algebra on pairs with the pair coproduct
/// Delta(Gamma, gamma) = sum (Gamma, delta) ⊗ (Gamma/delta, gamma/delta).
class PairHopf {
public:
    explicit PairHopf(Theory t) : theory_(std::move(t)) {}

    const Theory& theory() const noexcept { return theory_; }
    const Registry<PairGenerator>& registry() const noexcept { return reg_; }

    Monomial monomial(const SpecifiedGraph& outer, const SpecifiedSubgraph& inner) {
        Monomial m;
        for (const auto& p : split(outer, inner)) m.push_back(reg_.intern(p));
        std::sort(m.begin(), m.end());
        return m;
    }

    /// Every inner specified subgraph making (outer, inner) a pair.
    std::vector<SpecifiedSubgraph> pairs(const SpecifiedGraph& outer) const {
        return specified_subgraphs(theory_, outer.graph, outer.graph.full_mask(), outer.spec);
    }

    /// gamma/delta as a specified subgraph of Gamma/delta, and the outer indices carried over.
    std::pair<SpecifiedGraph, SpecifiedSubgraph> quotient_pair(const SpecifiedGraph& outer, const SpecifiedSubgraph& inner,
                                                               const SpecifiedSubgraph& delta) const {
        const Graph& g = outer.graph;
        Contraction q = contract_specified(theory_, g, delta);
        SpecifiedSubgraph image;
        for (std::size_t p = 0; p < q.pair_map.size(); ++p)
            if (inner.kept >> q.pair_map[p] & 1) image.kept |= EdgeMask{1} << p;
        image.spec = pull_spec(q.vertex_map, components(q.graph, image.kept), components(g, inner.kept), inner.spec);
        auto spec = pull_spec(q.vertex_map, components(q.graph), components(g), outer.spec);
        return {SpecifiedGraph{std::move(q.graph), std::move(spec)}, std::move(image)};
    }

    Tensor coproduct(const SpecifiedGraph& outer, const SpecifiedSubgraph& inner) {
        Tensor out;
        for (const auto& delta : specified_subgraphs(theory_, outer.graph, inner.kept, inner.spec)) {
            auto [qo, qi] = quotient_pair(outer, inner, delta);
            out.add({monomial(outer, delta), monomial(qo, qi)}, 1);
        }
        return out;
    }

    Tensor coproduct(const std::string& k) {
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
        const auto& p = reg_.at(k);
        Tensor t = coproduct(SpecifiedGraph{p.outer, {p.spec}}, p.inner);
        return memo_.emplace(k, std::move(t)).first->second;
    }

    Tensor coproduct(const Monomial& m) {
        Tensor out({Monomial{}, Monomial{}}, 1);
        for (const auto& k : m) out = out * coproduct(k);
        return out;
    }

    long grade(const std::string& k) const { return feynhopf::grade(reg_.at(k)); }
    long grade(const Monomial& m) const {
        long s = 0;
        for (const auto& k : m) s += grade(k);
        return s;
    }

    /// Pairs with a degree-zero inner graph are identified with the unit in the quotient.
    bool is_unit(const std::string& k) const { return grade(k) == 0; }

    Element quotient(const Element& x) const {
        return feynhopf::quotient(x, [&](const std::string& k) { return is_unit(k); });
    }
    Tensor quotient(const Tensor& x) const {
        return feynhopf::quotient(x, [&](const std::string& k) { return is_unit(k); });
    }
    Tensor reduced_coproduct(const Monomial& m) { return quotient(coproduct(m)); }

    /// Forgets the ambient graph: (Gamma, gamma) maps to the components of gamma.
    Monomial p2(const std::string& k, GraphHopf& h) const {
        const auto& p = reg_.at(k);
        auto comps = components(p.outer, p.inner.kept);
        std::vector<unsigned> spec = p.inner.spec;
        Monomial out;
        for (std::size_t c = 0; c < comps.count; ++c) {
            Graph piece = extract(p.outer, p.inner.kept, comps, c).graph;
            auto m = h.monomial({piece, {spec[c]}});
            out = out * m;
        }
        return out;
    }
    Monomial p2(const Monomial& m, GraphHopf& h) const {
        Monomial out;
        for (const auto& k : m) out = out * p2(k, h);
        return out;
    }
    Tensor p2(const Tensor& t, GraphHopf& h) const {
        Tensor out;
        for (const auto& [k, c] : t.terms()) out.add({p2(k.first, h), p2(k.second, h)}, c);
        return out;
    }

private:
    Theory theory_;
    Registry<PairGenerator> reg_;
    std::map<std::string, Tensor> memo_;
};

/// The counit on the quotient algebras: 1 on the unit monomial, 0 elsewhere.
inline Element counit_left(const Tensor& t) {
    Element out;
    for (const auto& [k, c] : t.terms())
        if (k.first.empty()) out.add(k.second, c);
    return out;
}

inline Element counit_right(const Tensor& t) {
    Element out;
    for (const auto& [k, c] : t.terms())
        if (k.second.empty()) out.add(k.first, c);
    return out;
}

}  // namespace feynhopf
