// Command-line front end: graphs, coproducts, Birkhoff decompositions and dimensionally regularized integrals.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "feynhopf/checks.hpp"
#include "feynhopf/integrand_io.hpp"

using namespace feynhopf;
using json = nlohmann::json;

namespace {

int exit_code(errc c) {
    switch (c) {
        case errc::parse:
        case errc::involution:
        case errc::dangling_halfedge: return 1;
        case errc::not_convergent:
        case errc::quadrature_failure:
        case errc::continuation_not_implemented: return 3;
        default: return 2;
    }
}

int report(std::string_view code, const std::string& detail, int status) {
    std::cerr << json{{"error", code}, {"detail", detail}}.dump() << "\n";
    return status;
}

struct GraphInput {
    Theory theory;
    SpecifiedGraph graph;
};

GraphInput load_graph(const std::string& path, const std::string& theory) {
    auto j = io::read_json_file(path);
    std::string name = theory;
    if (name.empty()) {
        if (!j.contains("theory")) fail(errc::parse, "no theory given: pass --theory or add a \"theory\" field");
        name = io::detail::str(j, "theory");
    }
    Theory t = io::load_theory(name);
    check_in_theory(t, io::graph_from_json(j));
    return {t, io::specified_from_json(t, j)};
}

Window parse_window(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) fail(errc::parse, "windows are written lo..hi");
    try {
        Window w{std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
        if (w.min > w.max) fail(errc::invalid_argument, "empty window " + s);
        return w;
    } catch (const std::logic_error&) {
        fail(errc::parse, "windows are written lo..hi");
    }
}

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

/// "full", "skeleton", or "edges=h1,h2[;spec=i,j]" naming internal edges by either half-edge id.
SpecifiedSubgraph select_subgraph(const Theory& t, const SpecifiedGraph& sg, const std::string& sel) {
    const Graph& g = sg.graph;
    EdgeMask kept = 0;
    std::vector<unsigned> spec;
    bool with_spec = false;
    if (sel == "full") {
        kept = g.full_mask();
    } else if (sel != "skeleton") {
        for (const auto& part : split_list(sel, ';')) {
            auto eq = part.find('=');
            std::string k = part.substr(0, eq), v = eq == std::string::npos ? "" : part.substr(eq + 1);
            if (k == "edges") {
                for (const auto& id : split_list(v)) {
                    std::size_t h = g.halfedge_index(id), p = 0;
                    for (; p < g.internal_count(); ++p)
                        if (g.internal_pairs()[p].first == h || g.internal_pairs()[p].second == h) break;
                    if (p == g.internal_count()) fail(errc::not_a_subgraph, "'" + id + "' is an external leg");
                    kept |= EdgeMask{1} << p;
                }
            } else if (k == "spec") {
                with_spec = true;
                for (const auto& x : split_list(v)) spec.push_back(static_cast<unsigned>(std::stoul(x)));
            } else {
                fail(errc::parse, "unknown subgraph selector '" + k + "'");
            }
        }
    }
    for (auto& s : PairHopf(t).pairs(sg))
        if (s.kept == kept && (!with_spec || s.spec == spec)) return s;
    fail(errc::not_specified_subgraph, "'" + sel + "' does not select a specified subgraph giving a pair");
}

std::string edge_list(const Graph& g, EdgeMask kept) {
    std::string s;
    for (std::size_t p = 0; p < g.internal_count(); ++p)
        if (kept >> p & 1) s += (s.empty() ? "" : ",") + g.halfedges()[g.internal_pairs()[p].first].id;
    return s;
}

std::string spec_list(const std::vector<unsigned>& spec) {
    std::string s;
    for (auto x : spec) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

Measure parse_measure(const std::string& m) { return m == "normalized" ? Measure::normalized : Measure::lebesgue; }

std::string laurent_lines(const LaurentSeries<std::complex<double>>& s, Window w) {
    std::string out;
    for (int n = w.min; n <= w.max; ++n) out += "a[" + std::to_string(n) + "] = " + to_string(s[n]) + "\n";
    return out;
}

json laurent_json(const LaurentSeries<std::complex<double>>& s, Window w) {
    json out = json::object();
    for (int n = w.min; n <= w.max; ++n) out[std::to_string(n)] = io::complex_to_json(s[n]);
    return out;
}

template <class R>
void print_birkhoff(const Character<R>& phi, const Scheme<R>& s, const SpecifiedGraph& sg, const SpecifiedSubgraph& inner) {
    auto [minus, plus] = birkhoff(phi, s);
    std::cout << "phi:\n" << phi(sg, inner).render() << "\n";
    std::cout << "phi_-:\n" << minus(sg, inner).render() << "\n";
    std::cout << "phi_+:\n" << plus(sg, inner).render() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hopf algebras of specified Feynman graphs, Birkhoff decomposition and dimensional regularization"};
    app.require_subcommand(1);

    std::string graph_path, theory_name, subgraph = "full", space = "D", scheme_name = "minimal", window_text = "-2..2",
                character = "feynman", integrand_path, measure = "lebesgue", corpus_dir, d_text;
    std::uint64_t seed = 1;
    int center = 4;
    std::size_t samples = 64;
    bool as_json = false, reduced = false;

    auto add_graph = [&](CLI::App* c) {
        c->add_option("graph", graph_path, "graph JSON file")->required();
        c->add_option("--theory", theory_name, "preset name or theory file (default: the file's \"theory\" field)");
    };

    auto* validate = app.add_subcommand("validate", "structural summary of a graph");
    add_graph(validate);
    auto* coproduct = app.add_subcommand("coproduct", "coproduct in H_T or D_T");
    add_graph(coproduct);
    coproduct->add_option("--space", space, "H or D")->check(CLI::IsMember({"H", "D"}));
    coproduct->add_option("--subgraph", subgraph, "inner graph for D: full, skeleton or edges=h1,h2[;spec=i,j]");
    coproduct->add_flag("--reduced", reduced, "work in the quotient by degree-zero generators");
    auto* pairs = app.add_subcommand("pairs", "specified subgraphs gamma making (Gamma, gamma) a pair");
    add_graph(pairs);
    pairs->add_flag("--json", as_json);
    auto* birk = app.add_subcommand("birkhoff", "Birkhoff decomposition of a character on one pair");
    add_graph(birk);
    birk->add_option("--subgraph", subgraph, "full, skeleton or edges=h1,h2[;spec=i,j]");
    birk->add_option("--scheme", scheme_name)->check(CLI::IsMember({"minimal", "taylor"}));
    birk->add_option("--character", character)->check(CLI::IsMember({"feynman", "synthetic"}));
    birk->add_option("--seed", seed, "seed of the synthetic character");
    birk->add_option("--window", window_text, "Laurent window lo..hi for the renormalized value");
    birk->add_option("--measure", measure)->check(CLI::IsMember({"lebesgue", "normalized"}));
    auto* integrate = app.add_subcommand("integrate", "I^D of a Feynman-type integrand at one complex D");
    integrate->add_option("--integrand", integrand_path)->required();
    integrate->add_option("--D", d_text, "real number or {\"re\":x,\"im\":y}")->required();
    integrate->add_option("--measure", measure)->check(CLI::IsMember({"lebesgue", "normalized"}));
    integrate->add_flag("--json", as_json);
    auto* laurent = app.add_subcommand("laurent", "Laurent coefficients of I^D in z = D - center");
    laurent->add_option("--integrand", integrand_path)->required();
    laurent->add_option("--center", center);
    laurent->add_option("--window", window_text, "lo..hi");
    laurent->add_option("--samples", samples, "points on the Cauchy circle")->check(CLI::Range(8, 4096));
    laurent->add_option("--measure", measure)->check(CLI::IsMember({"lebesgue", "normalized"}));
    laurent->add_flag("--json", as_json);
    auto* check = app.add_subcommand("check", "invariant suites over a corpus directory");
    check->add_option("--corpus", corpus_dir)->required();
    std::vector<std::string> suites;
    check->add_option("--suite", suites, "coassociativity, p2, group, birkhoff (default: all)")
        ->check(CLI::IsMember({"coassociativity", "p2", "group", "birkhoff"}));
    auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of a graph");
    add_graph(dot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report(to_string(errc::parse), e.what(), 1);
    }

    try {
        if (*validate) {
            auto in = load_graph(graph_path, theory_name);
            const Graph& g = in.graph.graph;
            std::cout << "L=" << loop_number(g) << ", 1PI=" << (is_1pi(g) ? "yes" : "no");
            if (components(g).count == 1) std::cout << ", ω=" << superficial_degree(in.theory, g);
            std::cout << "\n";
            std::cout << "components=" << components(g).count << ", internal=" << g.internal_count()
                      << ", external=" << g.halfedge_count() - 2 * g.internal_count()
                      << ", in_theory=" << (is_in_theory(in.theory, in.graph) ? "yes" : "no") << "\n";
        } else if (*coproduct) {
            auto in = load_graph(graph_path, theory_name);
            Tensor t;
            if (space == "H") {
                GraphHopf h(in.theory);
                auto m = h.monomial(in.graph);
                t = reduced ? h.reduced_coproduct(drop_units(m, [&](const std::string& k) { return h.is_unit(k); }))
                            : h.coproduct(m);
            } else {
                PairHopf d(in.theory);
                auto m = d.monomial(in.graph, select_subgraph(in.theory, in.graph, subgraph));
                t = reduced ? d.reduced_coproduct(drop_units(m, [&](const std::string& k) { return d.is_unit(k); }))
                            : d.coproduct(m);
            }
            std::cout << render(t);
        } else if (*pairs) {
            auto in = load_graph(graph_path, theory_name);
            json out = json::array();
            for (const auto& s : PairHopf(in.theory).pairs(in.graph)) {
                long g = loop_number(in.graph.graph, s.kept);
                if (as_json)
                    out.push_back({{"edges", split_list(edge_list(in.graph.graph, s.kept))}, {"spec", s.spec}, {"grade", g}});
                else
                    std::cout << "edges=" << edge_list(in.graph.graph, s.kept) << ";spec=" << spec_list(s.spec)
                              << " grade=" << g << "\n";
            }
            if (as_json) std::cout << out.dump(1) << "\n";
        } else if (*birk) {
            auto in = load_graph(graph_path, theory_name);
            auto inner = select_subgraph(in.theory, in.graph, subgraph);
            if (scheme_name == "minimal") {
                using L = LaurentSeries<Rational>;
                auto phi = character == "feynman" ? feynman_character<L>(in.theory) : synthetic_character<L>(in.theory, seed);
                print_birkhoff(phi, scheme<L>(scheme_name), in.graph, inner);
            } else {
                if (character == "feynman")
                    fail(errc::scheme_unavailable, "the Taylor scheme needs momentum-jet coefficients; use --character synthetic");
                auto phi = synthetic_character<MultiPolynomial>(in.theory, seed);
                print_birkhoff(phi, scheme<MultiPolynomial>(scheme_name), in.graph, inner);
            }
            const Graph& g = in.graph.graph;
            if (character == "feynman" && components(g).count == 1 && inner.kept == g.full_mask() && loop_number(g) == 1) {
                Window w = parse_window(window_text);
                auto amp = amplitude(in.theory, g);
                std::size_t m = amp.integrand.subspace.size();
                auto bare = laurent_extract(amp.integrand, zeros(m, m), in.theory.dimension(), w, {}, parse_measure(measure));
                auto r = renormalize_primitive(bare);
                std::cout << "amplitude at zero external momenta, z = D - " << in.theory.dimension() << ":\n";
                std::cout << "bare: " << bare.render() << "\n";
                std::cout << "counterterm: " << r.minus.render() << "\n";
                std::cout << "renormalized: " << r.plus.render() << "\n";
                std::cout << "value at z=0: " << to_string(r.value) << "\n";
            }
        } else if (*integrate) {
            auto f = io::integrand_from_json(io::read_json_file(integrand_path));
            json dj;
            try {
                dj = json::parse(d_text);
            } catch (const json::exception&) {
                fail(errc::parse, "--D must be a number or {\"re\":x,\"im\":y}");
            }
            auto v = eval_parametric(f.integrand, f.external, io::complex_from_json(dj), {}, parse_measure(measure));
            if (as_json) std::cout << json{{"value", io::complex_to_json(v)}}.dump() << "\n";
            else std::cout << "value: " << to_string(v) << "\n";
        } else if (*laurent) {
            auto f = io::integrand_from_json(io::read_json_file(integrand_path));
            Window w = parse_window(window_text);
            CauchyOptions opt;
            opt.samples = samples;
            auto s = laurent_extract(f.integrand, f.external, center, w, opt, parse_measure(measure));
            if (as_json) std::cout << json{{"center", center}, {"coefficients", laurent_json(s, w)}}.dump(1) << "\n";
            else std::cout << laurent_lines(s, w);
        } else if (*check) {
            auto corpus = load_corpus(corpus_dir);
            auto want = [&](const std::string& s) {
                return suites.empty() || std::find(suites.begin(), suites.end(), s) != suites.end();
            };
            std::vector<CheckResult> results;
            if (want("coassociativity")) {
                results.push_back(check_coassociativity_h(corpus));
                results.push_back(check_coassociativity_d(corpus));
            }
            if (want("p2")) results.push_back(check_p2(corpus));
            if (want("group")) results.push_back(check_group(corpus));
            if (want("birkhoff")) results.push_back(check_birkhoff(corpus));
            bool ok = true;
            for (const auto& r : results) {
                std::cout << r.name << ": " << r.passed << "/" << r.total << " passed\n";
                for (const auto& f : r.failures) std::cout << "  failed: " << f << "\n";
                ok = ok && r.ok();
            }
            return ok ? 0 : 4;
        } else if (*dot) {
            auto in = load_graph(graph_path, theory_name);
            std::cout << io::to_dot(in.graph.graph);
        }
    } catch (const error& e) {
        return report(to_string(e.code()), e.detail(), exit_code(e.code()));
    } catch (const std::exception& e) {
        return report("InvalidArgument", e.what(), 2);
    }
    return 0;
}
