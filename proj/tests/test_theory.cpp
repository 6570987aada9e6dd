#include <gtest/gtest.h>

#include "corpus.hpp"
#include "feynhopf/theory.hpp"

using namespace feynhopf;

namespace {

EdgeMask mask_between(const Graph& g, std::vector<std::pair<std::string, std::string>> ends) {
    EdgeMask m = 0;
    for (std::size_t p = 0; p < g.internal_count(); ++p) {
        auto a = g.vertices()[g.halfedges()[g.internal_pairs()[p].first].vertex].id;
        auto b = g.vertices()[g.halfedges()[g.internal_pairs()[p].second].vertex].id;
        for (auto& [x, y] : ends)
            if ((a == x && b == y) || (a == y && b == x)) m |= EdgeMask{1} << p;
    }
    return m;
}

Graph box() {
    std::vector<VertexRecord> vs;
    std::vector<std::tuple<std::string, std::string, std::string>> hs;
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int v = 0; v < 4; ++v) {
        std::string id = "v" + std::to_string(v);
        vs.push_back({id, "v3"});
        for (int k = 0; k < 3; ++k) hs.emplace_back(id + "_" + std::to_string(k), id, "s");
    }
    for (int v = 0; v < 4; ++v)
        pairs.emplace_back("v" + std::to_string(v) + "_0", "v" + std::to_string((v + 1) % 4) + "_1");
    return Graph::from_ids(vs, hs, pairs);
}

// Loop number of a kept subgraph, counted from scratch.
long naive_loops(const Graph& g) {
    long e = static_cast<long>(g.internal_count()), v = static_cast<long>(g.vertex_count());
    return e - v + static_cast<long>(components(g).count);
}

// Every (mask, index choice) checked by building both graphs and testing each piece separately.
std::size_t naive_count(const Theory& t, const SpecifiedGraph& sg) {
    const Graph& g = sg.graph;
    std::size_t count = 0;
    for (EdgeMask m = 0; m <= g.full_mask(); ++m) {
        auto comps = components(g, m);
        std::vector<std::vector<unsigned>> choices;
        bool ok = true;
        for (std::size_t c = 0; c < comps.count && ok; ++c) {
            Graph piece = component_graph(g, m, comps, c);
            if (!is_1pi(piece)) ok = false;
            if (piece.internal_count() == 0) {
                choices.push_back({t.resolve(piece.vertices()[0].type).second});
                continue;
            }
            long w = t.dimension() * naive_loops(piece) - 2 * static_cast<long>(piece.internal_count());
            auto allowed = [&]() -> std::vector<unsigned> {
                try {
                    return allowed_specifications(t, piece)[0];
                } catch (const error&) {
                    return {};
                }
            }();
            if (w < 0 || allowed.empty()) ok = false;
            bool full = piece.vertex_count() == g.vertex_count() && piece.internal_count() == g.internal_count();
            choices.push_back(full ? std::vector<unsigned>{sg.spec[0]} : allowed);
        }
        if (!ok) continue;
        std::vector<std::size_t> idx(choices.size(), 0);
        for (;;) {
            SpecifiedSubgraph sub{m, {}};
            for (std::size_t c = 0; c < choices.size(); ++c) sub.spec.push_back(choices[c][idx[c]]);
            SpecifiedGraph q = contract_specified(t, sg, sub);
            if (is_in_theory(t, q)) ++count;
            std::size_t c = 0;
            while (c < choices.size() && ++idx[c] == choices[c].size()) idx[c++] = 0;
            if (c == choices.size()) break;
        }
    }
    return count;
}

}  // namespace

TEST(SuperficialDegree, Phi3) {
    Theory t = preset("phi3");
    EXPECT_EQ(superficial_degree(t, corpus::load("phi3_bubble").graph.graph), 2);
    EXPECT_EQ(superficial_degree(t, corpus::load("phi3_triangle").graph.graph), 0);
    EXPECT_EQ(superficial_degree(t, box()), -2);
}

TEST(SuperficialDegree, UnknownEdgeType) {
    Theory t = preset("phi4");
    Graph g = Graph::from_ids({{"a", "v"}}, {{"h1", "a", "q"}, {"h2", "a", "q"}}, {{"h1", "h2"}});
    try {
        superficial_degree(t, g);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::unknown_edge_type);
    }
}

TEST(InTheory, Examples) {
    Theory t = preset("phi3");
    auto b = corpus::load("phi3_bubble").graph;
    EXPECT_TRUE(is_in_theory(t, {b.graph, {0}}));
    EXPECT_TRUE(is_in_theory(t, {b.graph, {1}}));
    EXPECT_FALSE(is_in_theory(t, {b.graph, {2}}));
    EXPECT_FALSE(is_in_theory(t, {box(), {0}}));
    Graph bridge = Graph::from_ids({{"a", "v3"}, {"b", "v3"}},
                                   {{"a1", "a", "s"}, {"a2", "a", "s"}, {"a3", "a", "s"}, {"b1", "b", "s"}, {"b2", "b", "s"}, {"b3", "b", "s"}},
                                   {{"a1", "b1"}, {"a2", "a3"}});
    EXPECT_FALSE(is_in_theory(t, {bridge, {0}}));
    EXPECT_TRUE(is_in_theory(t, corpus::load("phi3_v3_residue").graph));
}

TEST(InTheory, FourValentContractionRejected) {
    Theory t = preset("phi3");
    auto g = corpus::load("phi3_primitive_vertex").graph;
    // the square x-u-y-w is 1PI and shrinks to a four-legged vertex
    EdgeMask m = mask_between(g.graph, {{"x", "u"}, {"u", "y"}, {"y", "w"}, {"w", "x"}});
    EXPECT_TRUE(is_locally_1pi(g.graph, m));
    auto comps = components(g.graph, m);
    bool four = false;
    for (std::size_t c = 0; c < comps.count; ++c)
        four |= residue_shape(g.graph, m, comps, c).size() == 4 && !t.by_shape(residue_shape(g.graph, m, comps, c));
    EXPECT_TRUE(four);
    for (const auto& sub : specified_subgraphs(t, g.graph, g.graph.full_mask(), g.spec)) EXPECT_NE(sub.kept, m);
}

TEST(AllowedSpecifications, Examples) {
    Theory t = preset("phi3");
    EXPECT_EQ(allowed_specifications(t, corpus::load("phi3_bubble").graph.graph), (std::vector<std::vector<unsigned>>{{0, 1}}));
    EXPECT_EQ(allowed_specifications(t, corpus::load("phi3_triangle").graph.graph), (std::vector<std::vector<unsigned>>{{0}}));
    EXPECT_EQ(allowed_specifications(t, corpus::load("phi3_bubble_triangle").graph.graph),
              (std::vector<std::vector<unsigned>>{{0, 1}, {0}}));
    try {
        allowed_specifications(t, box());
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::unknown_vertex_type);
    }
}

TEST(ContractSpecified, InnerBubbleWithIndexOne) {
    Theory t = preset("phi3");
    auto sg = corpus::load("phi3_nested_self_energy").graph;
    EdgeMask inner = mask_between(sg.graph, {{"c", "d"}});
    auto comps = components(sg.graph, inner);
    SpecifiedSubgraph sub{inner, {}};
    for (std::size_t c = 0; c < comps.count; ++c) {
        auto m = comps.members(c);
        sub.spec.push_back(m.size() == 2 ? 1u : own_spec(t, sg.graph, m[0]));
    }
    SpecifiedGraph q = contract_specified(t, sg, sub);
    EXPECT_EQ(loop_number(q.graph), 1);
    EXPECT_EQ(q.spec, sg.spec);
    EXPECT_EQ(q.graph.vertices()[q.graph.vertex_index("c+d")].type, "x:1");
    EXPECT_EQ(canonical_key(q.graph), canonical_key(corpus::load("phi3_bubble_x1").graph.graph));
}

TEST(ContractSpecified, FullAndSkeleton) {
    Theory t = preset("phi3");
    auto sg = corpus::load("phi3_bubble").graph;
    sg.spec = {1};
    SpecifiedGraph r = contract_specified(t, sg, {sg.graph.full_mask(), {1}});
    ASSERT_EQ(r.graph.vertex_count(), 1u);
    EXPECT_EQ(r.graph.vertices()[0].type, "x:1");
    SpecifiedGraph s = contract_specified(t, sg, {0, {0, 0}});
    EXPECT_EQ(canonical_key(s.graph), canonical_key(sg.graph));
    EXPECT_EQ(s.spec, sg.spec);
    try {
        contract_specified(t, sg, {sg.graph.full_mask(), {0}});
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::full_component_spec_mismatch);
    }
}

TEST(Presets, Tables) {
    EXPECT_EQ(preset("phi3").dimension(), 6);
    EXPECT_EQ(preset("phi4").dimension(), 4);
    auto qed = preset("qed");
    ASSERT_EQ(qed.edge_types().size(), 2u);
    EXPECT_EQ(qed.edge_types()[0].label, "f");
    EXPECT_EQ(qed.edge_types()[1].label, "a");
    EXPECT_EQ(preset("phi4").by_shape({"s", "s", "s", "s"})->label, "v4");
    try {
        preset("yukawa");
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::unknown_theory);
    }
}

TEST(SpecifiedSubgraphs, MatchNaiveEnumeration) {
    for (const auto& e : corpus::all()) {
        if (components(e.graph.graph).count != 1) continue;
        auto subs = specified_subgraphs(e.theory, e.graph.graph, e.graph.graph.full_mask(), e.graph.spec);
        EXPECT_EQ(subs.size(), naive_count(e.theory, e.graph)) << e.name;
    }
}

TEST(SpecifiedSubgraphs, GradingAdditive) {
    for (const auto& e : corpus::all()) {
        const Graph& g = e.graph.graph;
        for (const auto& sub : specified_subgraphs(e.theory, g, g.full_mask(), e.graph.spec)) {
            SpecifiedGraph q = contract_specified(e.theory, e.graph, sub);
            EXPECT_TRUE(is_in_theory(e.theory, q)) << e.name;
            EXPECT_EQ(loop_number(g, sub.kept) + loop_number(q.graph), loop_number(g)) << e.name;
        }
    }
}

TEST(SpecifiedSubgraphs, BubbleTerms) {
    auto e = corpus::load("phi3_bubble");
    auto subs = specified_subgraphs(e.theory, e.graph.graph, e.graph.graph.full_mask(), e.graph.spec);
    ASSERT_EQ(subs.size(), 2u);
    EXPECT_EQ(subs[0].kept, 0u);
    EXPECT_EQ(subs[1].spec, std::vector<unsigned>{0});
}

TEST(Momenta, Conservation) {
    auto g = corpus::load("phi3_bubble").graph.graph;
    // a1-b1, a2-b2 internal; a3, b3 external
    auto r = [](long n) { return std::vector<Rational>{Rational(n)}; };
    MomentumConfiguration ok{{r(1), r(-3), r(2), r(-1), r(3), r(-2)}};
    EXPECT_TRUE(is_admissible(g, ok));
    MomentumConfiguration bad{{r(1), r(-3), r(2), r(1), r(3), r(-2)}};
    EXPECT_FALSE(is_admissible(g, bad));
}
