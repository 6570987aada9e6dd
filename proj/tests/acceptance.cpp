// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "feynhopf/checks.hpp"
#include "oracles.hpp"

using namespace feynhopf;

namespace {

using L = LaurentSeries<Rational>;
constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = 0.57721566490153286061;

struct Outcome {
    bool pass = false;
    std::string detail;
};

bool run(int n, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = budget_s <= 0 || s < budget_s;
    bool pass = o.pass && in_time;
    std::printf("criterion %2d %s: %s (%s; %.2f s%s)\n", n, title.c_str(), pass ? "PASS" : "FAIL", o.detail.c_str(), s,
                in_time ? "" : ", over time budget");
    std::fflush(stdout);
    return pass;
}

std::string summary(const CheckResult& r) {
    std::string s = r.name + " " + std::to_string(r.passed) + "/" + std::to_string(r.total);
    if (!r.failures.empty()) s += ", first failure: " + r.failures.front();
    return s;
}

Labels prefixed(const std::string& p, std::size_t n) {
    Labels l;
    for (std::size_t i = 0; i < n; ++i) l.push_back(p + std::to_string(i));
    return l;
}

Operator<L> random_operator(std::mt19937_64& rng, const Labels& from, Labels& to) {
    to.clear();
    Labels gone;
    for (const auto& x : from) (rng() % 2 ? to : gone).push_back(x);
    Operator<L> op(from, to);
    for (int k = 0, n = 1 + int(rng() % 3); k < n; ++k) {
        Word w;
        if (rng() % 2) w.atoms.push_back({Atom::Kind::mult, from, rational(long(rng() % 4) + 1, 2)});
        if (!gone.empty()) w.atoms.push_back({Atom::Kind::integrate, gone, 0});
        if (rng() % 2 && !to.empty()) w.atoms.push_back({Atom::Kind::mult, to, rational(long(rng() % 4) + 1, 3)});
        op.add(w, L(-1, {Rational(long(rng() % 5) - 2), Rational(long(rng() % 3) + 1)}));
    }
    return op;
}

MultiPolynomial random_polynomial(std::mt19937_64& rng) {
    MultiPolynomial p;
    const std::size_t vars = 1 + rng() % 3;
    for (int k = 0, n = 3 + int(rng() % 10); k < n; ++k) {
        MultiPolynomial::Exponent e(vars, 0);
        for (unsigned budget = unsigned(rng() % 7); budget > 0; --budget)
            if (rng() % 2) ++e[rng() % vars];
        p.add(e, rational(long(rng() % 11) - 5, long(rng() % 4) + 1));
    }
    return p;
}

/// The closed form at the point Y (columns y_d) against a tensor trapezoid over the integrated coordinates,
/// one copy of R^(n-m) per dimension.
bool gaussian_matches_quadrature(const RMatrix& b, const std::vector<std::size_t>& f, int dim, std::mt19937& rng,
                                 double& worst) {
    const std::size_t m = f.size();
    std::vector<std::vector<Rational>> y(dim, std::vector<Rational>(m));
    for (auto& col : y)
        for (auto& x : col) x = rational(long(rng() % 7) - 3, long(rng() % 3) + 2);
    RMatrix c = zeros(m, m);
    for (const auto& col : y)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) c[i][j] += col[i] * col[j];
    double closed = integrate_gaussian(gaussian(b), f)(c, dim).real();
    double numeric = 1;
    for (const auto& col : y) {
        std::vector<double> k;
        for (const auto& x : col) k.push_back(x.get_d());
        numeric *= oracle::gaussian_slice(b, f, k, 9, 0.04);
    }
    double rel = std::abs(closed - numeric) / std::abs(numeric);
    worst = std::max(worst, rel);
    return rel <= 1e-8;
}

SchwingerIntegrand bubble() {
    SchwingerIntegrand s;
    s.dim = 1;
    s.forms = {RMatrix{{Rational(1)}}, RMatrix{{Rational(1)}}};
    s.masses2 = {1, 1};
    return s;
}

/// pi^(D/2) Gamma(2 - D/2) around D = 4 + z.
double bubble_oracle(double z) { return std::pow(pi, (4 + z) / 2) * std::tgamma(-z / 2); }

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

}  // namespace

int main() {
    const auto corpus = load_corpus(FEYNHOPF_CORPUS_DIR);
    bool all = true;

    all &= run(1, "coassociativity in H and D", 10, [&] {
        long max_loops = 0;
        for (const auto& e : corpus) max_loops = std::max(max_loops, loop_number(e.graph.graph));
        auto h = check_coassociativity_h(corpus), d = check_coassociativity_d(corpus);
        return Outcome{h.ok() && d.ok() && corpus.size() >= 12 && max_loops <= 2,
                       std::to_string(corpus.size()) + " graphs; " + summary(h) + "; " + summary(d)};
    });

    all &= run(2, "P2 morphism", 0, [&] {
        auto r = check_p2(corpus);
        return Outcome{r.ok(), summary(r)};
    });

    all &= run(3, "convolution group", 60, [&] {
        auto r = check_group(corpus, 3, 2, 5);
        return Outcome{r.ok(), "Feynman + 3 synthetic characters, grading <= 2, 5 probes; " + summary(r)};
    });

    all &= run(4, "bullet/composition compatibility", 0, [&] {
        std::mt19937_64 rng(404);
        int ok = 0, total = 60;
        for (int trial = 0; trial < total; ++trial) {
            Labels mid1, out1, mid2, out2;
            auto a1 = random_operator(rng, prefixed("x", 1 + rng() % 3), mid1);
            auto a2 = random_operator(rng, prefixed("y", 1 + rng() % 3), mid2);
            auto b1 = random_operator(rng, mid1, out1), b2 = random_operator(rng, mid2, out2);
            auto lhs = bullet(compose(b1, a1), compose(b2, a2)), rhs = compose(bullet(b1, b2), bullet(a1, a2));
            ok += operators_equal(lhs, rhs, random_probes(lhs.domain(), 5, std::uint64_t(trial)));
        }
        return Outcome{ok == total, std::to_string(ok) + "/" + std::to_string(total) + " quadruples"};
    });

    all &= run(5, "Rota-Baxter family law", 5, [&] {
        std::mt19937_64 rng(505);
        int pairs = 100, ok = 0, total = 0;
        for (int k = 0; k < pairs; ++k) {
            auto f = random_polynomial(rng), g = random_polynomial(rng);
            auto fg = f * g;
            for (unsigned s = 0; s <= 4; ++s)
                for (unsigned t = 0; t <= 4; ++t) {
                    auto pf = taylor_pm(s, f), pg = taylor_pm(t, g);
                    ok += pf * pg == taylor_pm(s + t, pf * g + f * pg - fg);
                    ++total;
                }
        }
        return Outcome{ok == total, std::to_string(pairs) + " pairs, " + std::to_string(ok) + "/" + std::to_string(total) +
                                        " (s,t) instances"};
    });

    all &= run(6, "Birkhoff decomposition (minimal, taylor)", 0, [&] {
        auto r = check_birkhoff(corpus, 2, 5);
        return Outcome{r.ok(), summary(r)};
    });

    all &= run(7, "Gaussian closed form vs quadrature", 30, [&] {
        std::mt19937 rng(707);
        int ok = 0, total = 0;
        double worst = 0;
        for (int trial = 0; trial < 12; ++trial) {
            std::size_t m = 1 + trial % 2, n = m + 1 + (trial / 2) % (3 - m);
            RMatrix b = oracle::random_spd(rng, n);
            std::vector<std::size_t> all_coords(n);
            for (std::size_t i = 0; i < n; ++i) all_coords[i] = i;
            std::shuffle(all_coords.begin(), all_coords.end(), rng);
            std::vector<std::size_t> f(all_coords.begin(), all_coords.begin() + long(m));
            for (int dim : {1, 2}) {
                ok += gaussian_matches_quadrature(b, f, dim, rng, worst);
                ++total;
            }
        }
        return Outcome{ok == total, std::to_string(ok) + "/" + std::to_string(total) + " at D = 1, 2; worst rel " + fmt(worst)};
    });

    all &= run(8, "functoriality", 0, [&] {
        std::mt19937 rng(808);
        int ok = 0, total = 24;
        for (int trial = 0; trial < total; ++trial) {
            std::size_t n = 2 + rng() % 4;
            std::vector<std::size_t> coords(n);
            for (std::size_t i = 0; i < n; ++i) coords[i] = i;
            std::shuffle(coords.begin(), coords.end(), rng);
            std::size_t fm = 1 + rng() % (n - 1), gm = rng() % (fm + 1);
            std::vector<std::size_t> f(coords.begin(), coords.begin() + long(fm)), g(coords.begin(), coords.begin() + long(gm));
            RMatrix b = oracle::random_spd(rng, n);
            ok += compose_check(b, f, g) && compose_check(b, f, g, Measure::normalized);
        }
        auto nested = load_corpus(FEYNHOPF_CORPUS_DIR);
        int stages = 0, staged_ok = 0;
        for (const auto& e : nested) {
            if (e.name != "phi3_nested_self_energy") continue;
            auto phi = feynman_character<L>(e.theory);
            for (const auto& inner : PairHopf(e.theory).pairs(e.graph))
                for (const auto& term : coproduct_terms(e.theory, e.graph, inner)) {
                    auto staged = compose(phi(term.quotient_outer, term.quotient_inner), phi(e.graph, term.delta));
                    staged_ok += equal_on_probes(staged, phi(e.graph, inner), 5);
                    ++stages;
                }
        }
        return Outcome{ok == total && stages > 0 && staged_ok == stages,
                       std::to_string(ok) + "/" + std::to_string(total) + " nested triples; Feynman stage law " +
                           std::to_string(staged_ok) + "/" + std::to_string(stages) + " on the nested two-loop graph"};
    });

    all &= run(9, "bubble numbers", 60, [&] {
        double at3 = eval_parametric(bubble(), {}, 3.0).real();
        double oracle3 = std::pow(pi, 1.5) * std::tgamma(0.5);
        auto s = laurent_extract(bubble(), {}, 4, Window{-2, 2});
        double am1 = -2 * pi * pi, a0 = pi * pi * (-euler_gamma - std::log(pi));
        const double h = 1e-3;
        double series_am1 = h * (bubble_oracle(h) - bubble_oracle(-h)) / 2, series_a0 = (bubble_oracle(h) + bubble_oracle(-h)) / 2;
        bool oracle_consistent = std::abs(series_am1 / am1 - 1) < 1e-5 && std::abs(series_a0 / a0 - 1) < 1e-4;
        bool pass = oracle_consistent && std::abs(at3 / oracle3 - 1) <= 1e-6 &&
                    std::abs(s[-1].real() - am1) <= 1e-3 * std::abs(am1) && std::abs(s[0].real() / a0 - 1) <= 1e-4;
        return Outcome{pass, "D=3: " + fmt(at3) + " vs " + fmt(oracle3) + "; a_-1 = " + fmt(s[-1].real()) + " vs " + fmt(am1) +
                                 "; a_0 = " + fmt(s[0].real()) + " vs " + fmt(a0)};
    });

    all &= run(10, "renormalized bubble is finite", 0, [&] {
        const CorpusEntry* fish = nullptr;
        for (const auto& e : corpus)
            if (e.name == "phi4_fish") fish = &e;
        if (!fish) return Outcome{false, "phi4_fish missing from the corpus"};
        auto amp = amplitude(fish->theory, fish->graph.graph);
        std::size_t m = amp.integrand.subspace.size();
        auto bare = laurent_extract(amp.integrand, zeros(m, m), fish->theory.dimension(), Window{-3, 2});
        auto r = renormalize_primitive(bare);
        double worst = 0;
        for (int k = -3; k < 0; ++k) worst = std::max(worst, std::abs(r.plus[k]));
        auto [minus, plus] = birkhoff(feynman_character<L>(fish->theory), minimal_scheme());
        SpecifiedSubgraph full = PairHopf(fish->theory).pairs(fish->graph).back();
        bool fixed_point = full.kept == fish->graph.graph.full_mask() &&
                           equal_on_probes(plus(fish->graph, full), feynman_character<L>(fish->theory)(fish->graph, full), 5);
        bool pass = worst <= 1e-10 && r.value == bare[0] && fixed_point && std::abs(r.minus[-1] + bare[-1]) == 0.0;
        return Outcome{pass, "max |negative order| " + fmt(worst) + "; z^0 " + to_string(r.value) + " = bare a_0 " +
                                 to_string(bare[0])};
    });

    return all ? 0 : 1;
}
