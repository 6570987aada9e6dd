#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "feynhopf/io.hpp"
#include "feynhopf/renorm.hpp"

namespace feynhopf {

struct CorpusEntry {
    std::string name;
    Theory theory;
    SpecifiedGraph graph;
};

/// Every *.json file in dir, sorted by name; each carries a "theory" field.
inline std::vector<CorpusEntry> load_corpus(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir, ec))
        if (e.path().extension() == ".json") files.push_back(e.path());
    if (ec) fail(errc::parse, "cannot read corpus directory '" + dir + "'");
    std::sort(files.begin(), files.end());
    std::vector<CorpusEntry> out;
    for (const auto& f : files) {
        auto j = io::read_json_file(f.string());
        auto t = io::load_theory(io::detail::str(j, "theory"));
        out.push_back({f.stem().string(), t, io::specified_from_json(t, j)});
    }
    return out;
}

struct CheckResult {
    explicit CheckResult(std::string n) : name(std::move(n)) {}

    std::string name;
    std::size_t passed = 0, total = 0;
    std::vector<std::string> failures;

    bool ok() const { return total > 0 && passed == total; }
    void record(bool ok, const std::string& what) {
        ++total;
        if (ok) ++passed;
        else failures.push_back(what);
    }
};

struct CorpusPair {
    std::string name;
    Theory theory;
    SpecifiedGraph outer;
    SpecifiedSubgraph inner;
};

inline std::vector<CorpusPair> corpus_pairs(const std::vector<CorpusEntry>& corpus, long max_grade = 64) {
    std::vector<CorpusPair> out;
    for (const auto& e : corpus) {
        PairHopf d(e.theory);
        for (auto& sub : d.pairs(e.graph))
            if (loop_number(e.graph.graph, sub.kept) <= max_grade) out.push_back({e.name, e.theory, e.graph, std::move(sub)});
    }
    return out;
}

/// (Delta x id) Delta = (id x Delta) Delta on every corpus graph, before and after the degree-zero quotient.
inline CheckResult check_coassociativity_h(const std::vector<CorpusEntry>& corpus) {
    CheckResult r("coassociativity H");
    for (const auto& e : corpus) {
        GraphHopf h(e.theory);
        auto m = h.monomial(e.graph);
        auto delta = [&](const Monomial& x) { return h.coproduct(x); };
        auto rdelta = [&](const Monomial& x) { return h.reduced_coproduct(x); };
        Tensor d = h.coproduct(m);
        Monomial q = drop_units(m, [&](const std::string& k) { return h.is_unit(k); });
        Tensor rd = h.reduced_coproduct(q);
        r.record(apply_left(d, delta) == apply_right(d, delta) && apply_left(rd, rdelta) == apply_right(rd, rdelta), e.name);
    }
    return r;
}

inline CheckResult check_coassociativity_d(const std::vector<CorpusEntry>& corpus) {
    CheckResult r("coassociativity D");
    std::map<std::string, PairHopf> spaces;
    for (const auto& pc : corpus_pairs(corpus)) {
        auto& d = spaces.try_emplace(pc.theory.name(), pc.theory).first->second;
        auto delta = [&](const Monomial& x) { return d.coproduct(x); };
        auto rdelta = [&](const Monomial& x) { return d.reduced_coproduct(x); };
        auto m = d.monomial(pc.outer, pc.inner);
        Tensor x = d.coproduct(m);
        Monomial q = drop_units(m, [&](const std::string& k) { return d.is_unit(k); });
        Tensor y = d.reduced_coproduct(q);
        r.record(apply_left(x, delta) == apply_right(x, delta) && apply_left(y, rdelta) == apply_right(y, rdelta), pc.name);
    }
    return r;
}

/// Delta_H o P2 = (P2 x P2) o Delta_D.
inline CheckResult check_p2(const std::vector<CorpusEntry>& corpus) {
    CheckResult r("P2 morphism");
    std::map<std::string, std::pair<PairHopf, GraphHopf>> spaces;
    for (const auto& pc : corpus_pairs(corpus)) {
        auto& [d, h] = spaces.try_emplace(pc.theory.name(), PairHopf(pc.theory), GraphHopf(pc.theory)).first->second;
        auto m = d.monomial(pc.outer, pc.inner);
        r.record(h.coproduct(d.p2(m, h)) == d.p2(d.coproduct(m), h), pc.name);
    }
    return r;
}

template <class R>
bool equal_on_probes(const Operator<R>& a, const Operator<R>& b, std::size_t probes, std::uint64_t seed = 1) {
    return a.domain() == b.domain() && a.codomain() == b.codomain() &&
           operators_equal(a, b, random_probes(a.domain(), probes, seed));
}

/// Identity, associativity and two-sided inverse laws for the Feynman character and synthetic characters.
inline CheckResult check_group(const std::vector<CorpusEntry>& corpus, std::size_t synthetic = 3, long max_grade = 2,
                               std::size_t probes = 5) {
    using L = LaurentSeries<Rational>;
    CheckResult r("convolution group");
    std::map<std::string, std::vector<CorpusPair>> by_theory;
    for (auto& pc : corpus_pairs(corpus, max_grade)) by_theory[pc.theory.name()].push_back(pc);
    for (const auto& [name, pairs] : by_theory) {
        const Theory& t = pairs.front().theory;
        std::vector<Character<L>> chars{feynman_character<L>(t)};
        for (std::size_t s = 1; s <= synthetic; ++s) chars.push_back(synthetic_character<L>(t, s));
        auto eps = counit_character<L>(t);
        for (std::size_t c = 0; c < chars.size(); ++c) {
            const auto &phi = chars[c], &psi = chars[(c + 1) % chars.size()], &chi = chars[(c + 2) % chars.size()];
            auto inv = inverse(phi);
            auto left = convolve(convolve(phi, psi), chi), right = convolve(phi, convolve(psi, chi));
            auto a = convolve(eps, phi), b = convolve(phi, eps), c1 = convolve(phi, inv), c2 = convolve(inv, phi);
            for (const auto& pc : pairs) {
                std::string tag = pc.name + " (character " + std::to_string(c) + ")";
                auto v = phi(pc.outer, pc.inner), e = eps(pc.outer, pc.inner);
                r.record(equal_on_probes(a(pc.outer, pc.inner), v, probes), "E / phi on " + tag);
                r.record(equal_on_probes(b(pc.outer, pc.inner), v, probes), "phi / E on " + tag);
                r.record(equal_on_probes(left(pc.outer, pc.inner), right(pc.outer, pc.inner), probes), "associativity on " + tag);
                r.record(equal_on_probes(c1(pc.outer, pc.inner), e, probes), "phi / phi^-1 on " + tag);
                r.record(equal_on_probes(c2(pc.outer, pc.inner), e, probes), "phi^-1 / phi on " + tag);
            }
        }
    }
    return r;
}

template <class R>
void check_birkhoff_of(CheckResult& r, const Character<R>& phi, const Scheme<R>& s, const std::vector<CorpusPair>& pairs,
                       const std::string& label, std::size_t probes) {
    auto [minus, plus] = birkhoff(phi, s);
    auto rebuilt = convolve(inverse(minus), plus);
    for (const auto& pc : pairs) {
        std::string tag = pc.name + " (" + label + ", " + s.name + ")";
        r.record(equal_on_probes(rebuilt(pc.outer, pc.inner), phi(pc.outer, pc.inner), probes), "reconstruction on " + tag);
        if (pc.inner.kept == 0) continue;
        if (components(pc.outer.graph).count == 1) {
            long g = loop_number(pc.outer.graph, pc.inner.kept);
            r.record(in_minus(s, minus(pc.outer, pc.inner), g), "phi_- in A_- on " + tag);
            r.record(in_plus(s, plus(pc.outer, pc.inner), g), "phi_+ in A_+ on " + tag);
        } else {
            r.record(equal_on_probes(minus.direct(pc.outer, pc.inner), minus(pc.outer, pc.inner), probes),
                     "phi_- multiplicative on " + tag);
            r.record(equal_on_probes(plus.direct(pc.outer, pc.inner), plus(pc.outer, pc.inner), probes),
                     "phi_+ multiplicative on " + tag);
        }
    }
}

/// Reconstruction, A_+/- membership and multiplicativity of phi_+/- under the minimal and Taylor schemes.
inline CheckResult check_birkhoff(const std::vector<CorpusEntry>& corpus, long max_grade = 2, std::size_t probes = 5) {
    using L = LaurentSeries<Rational>;
    CheckResult r("birkhoff");
    std::map<std::string, std::vector<CorpusPair>> by_theory;
    for (auto& pc : corpus_pairs(corpus, max_grade)) by_theory[pc.theory.name()].push_back(pc);
    for (const auto& [name, pairs] : by_theory) {
        const Theory& t = pairs.front().theory;
        check_birkhoff_of(r, feynman_character<L>(t), minimal_scheme(), pairs, "feynman", probes);
        check_birkhoff_of(r, synthetic_character<L>(t, 21), minimal_scheme(), pairs, "synthetic", probes);
        check_birkhoff_of(r, synthetic_character<MultiPolynomial>(t, 22), taylor_scheme(), pairs, "synthetic", probes);
    }
    return r;
}

}  // namespace feynhopf
