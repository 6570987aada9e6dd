#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "corpus.hpp"
#include "feynhopf/dimreg.hpp"
#include "oracles.hpp"

using namespace feynhopf;
using std::numbers::pi;

namespace {

RMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
    RMatrix m;
    for (auto& r : rows) {
        m.emplace_back();
        for (long x : r) m.back().push_back(Rational(x));
    }
    return m;
}

SchwingerIntegrand bubble() {
    SchwingerIntegrand s;
    s.dim = 1;
    s.forms = {mat({{1}}), mat({{1}})};
    s.masses2 = {1, 1};
    return s;
}

const double euler_gamma = 0.57721566490153286061;

}  // namespace

TEST(Schur, WorkedExample) {
    auto s = schur_split(mat({{2, 1}, {1, 2}}), {0});
    EXPECT_EQ(s.f_star, RMatrix{{Rational(3, 2)}});
    EXPECT_EQ(s.f_perp, mat({{2}}));
}

TEST(Schur, BlockDiagonalAndFullSubspace) {
    RMatrix b = mat({{3, 1, 0}, {1, 2, 0}, {0, 0, 5}});
    EXPECT_EQ(schur_split(b, {0, 1}).f_star, mat({{3, 1}, {1, 2}}));
    auto full = schur_split(b, {0, 1, 2});
    EXPECT_EQ(full.f_star, b);
    EXPECT_TRUE(full.f_perp.empty());
    EXPECT_EQ(determinant(full.f_perp), Rational(1));
}

TEST(Schur, SingularBlock) {
    try {
        schur_split(mat({{1, 0}, {0, 0}}), {0});
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::singular_block);
    }
}

TEST(Schur, QuotientIdentityOnRandomForms) {
    // det B = det B_{F-perp} * det B^{F*}, computed here by cofactor expansion.
    std::mt19937 rng(3);
    auto cofactor_det = [](const RMatrix& m) -> Rational {
        if (m.size() == 1) return m[0][0];
        if (m.size() == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    for (int trial = 0; trial < 20; ++trial) {
        RMatrix b = oracle::random_spd(rng, 3);
        auto s = schur_split(b, {0});
        EXPECT_EQ(cofactor_det(b), cofactor_det(s.f_perp) * cofactor_det(s.f_star));
        EXPECT_TRUE(is_positive_definite(b));
    }
}

TEST(Linalg, DefinitenessAgainstSylvester) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        RMatrix b = zeros(2, 2);
        b[0][0] = rational(long(rng() % 7) - 3);
        b[1][1] = rational(long(rng() % 7) - 3);
        b[0][1] = b[1][0] = rational(long(rng() % 5) - 2);
        Rational det = b[0][0] * b[1][1] - b[0][1] * b[0][1];
        EXPECT_EQ(is_positive_definite(b), sgn(b[0][0]) > 0 && sgn(det) > 0);
        EXPECT_EQ(is_positive_semidefinite(b), sgn(b[0][0]) >= 0 && sgn(b[1][1]) >= 0 && sgn(det) >= 0);
    }
}

TEST(Gaussian, OneDimensionalClosedForm) {
    auto g = integrate_gaussian(gaussian(mat({{3}})), std::vector<std::size_t>{});
    for (double d : {1.0, 2.0, 2.5})
        EXPECT_NEAR(g({}, d).real(), std::pow(pi, d / 2) * std::pow(3.0, -d / 2), 1e-12);
    EXPECT_NEAR(g({}, 1.0).real(), std::sqrt(pi / 3), 1e-12);
    EXPECT_NEAR(g({}, 1.0).real(), oracle::gaussian_slice(mat({{3}}), {}, {}), 1e-8 * std::sqrt(pi / 3));
}

TEST(Gaussian, FullSubspaceIsIdentity) {
    auto phi = gaussian(mat({{2, 1}, {1, 2}}));
    EXPECT_EQ(integrate_gaussian(phi, std::vector<std::size_t>{0, 1}), phi);
}

TEST(Gaussian, NotPositiveDefinite) {
    try {
        integrate_gaussian(gaussian(mat({{1, 2}, {2, 1}})), std::vector<std::size_t>{0});
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::not_positive_definite);
    }
}

TEST(Gaussian, ClosedFormMatchesQuadratureAtIntegerD) {
    std::mt19937 rng(11);
    int checked = 0;
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t m = 0; m < n && m <= 2; ++m) {
            for (int rep = 0; rep < 2; ++rep) {
                RMatrix b = oracle::random_spd(rng, n);
                std::vector<std::size_t> f;
                for (std::size_t i = 0; i < m; ++i) f.push_back(n - 1 - i);
                auto g = integrate_gaussian(gaussian(b), f);
                std::uniform_real_distribution<double> u(-1, 1);
                std::vector<double> k1(m), k2(m);
                for (auto& x : k1) x = u(rng);
                for (auto& x : k2) x = u(rng);
                auto gram = [&](int dim) {
                    RMatrix c = zeros(m, m);
                    for (std::size_t i = 0; i < m; ++i)
                        for (std::size_t j = 0; j < m; ++j) {
                            c[i][j] = k1[i] * k1[j];
                            if (dim == 2) c[i][j] += k2[i] * k2[j];
                        }
                    return c;
                };
                double one = oracle::gaussian_slice(b, f, k1);
                double two = one * oracle::gaussian_slice(b, f, k2);
                EXPECT_NEAR(g(gram(1), 1.0).real() / one, 1.0, 1e-8);
                EXPECT_NEAR(g(gram(2), 2.0).real() / two, 1.0, 1e-8);
                ++checked;
            }
        }
    EXPECT_GE(checked, 10);
}

TEST(Gaussian, Functoriality) {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 2 + rng() % 3;
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        std::shuffle(all.begin(), all.end(), rng);
        std::size_t fm = 1 + rng() % (n - 1), gm = rng() % (fm + 1);
        std::vector<std::size_t> f(all.begin(), all.begin() + long(fm)), g(all.begin(), all.begin() + long(gm));
        RMatrix b = oracle::random_spd(rng, n);
        EXPECT_TRUE(compose_check(b, f, g));
        EXPECT_TRUE(compose_check(b, f, g, Measure::normalized));
    }
    EXPECT_TRUE(compose_check(mat({{2, 0, 0}, {0, 3, 0}, {0, 0, 5}}), {0, 1}, {0}));
}

TEST(Gaussian, BlockDiagonalDetFactors) {
    auto direct = integrate_gaussian(gaussian(mat({{2, 0, 0}, {0, 3, 0}, {0, 0, 5}})), std::vector<std::size_t>{0});
    Prefactor expected;
    expected.pi_exponent = Affine{0, 1};
    expected.multiply_power(3, Affine{0, Rational(-1, 2)});
    expected.multiply_power(5, Affine{0, Rational(-1, 2)});
    EXPECT_EQ(direct.prefactor, expected);
    EXPECT_EQ(direct.prefactor.det_factors.size(), 1u);  // one coprime base, 15
    EXPECT_EQ(direct.prefactor.pi_exponent, (Affine{0, 1}));
    EXPECT_EQ(direct.form, mat({{2}}));
}

TEST(Gaussian, PrefactorEqualityAcrossBases) {
    Prefactor a, b;
    a.multiply_power(rational(6), Affine{1, 2});
    a.multiply_power(rational(10, 21), Affine{0, 1});
    b.multiply_power(rational(2), Affine{1, 3});
    b.multiply_power(rational(3), Affine{1, 2});
    b.multiply_power(rational(5), Affine{0, 1});
    b.multiply_power(rational(7), Affine{0, -1});
    EXPECT_NE(a, b);
    b.multiply_power(rational(3), Affine{0, -1});
    EXPECT_EQ(a, b);
    // Large coprime factors split the same way whichever product they arrive in.
    mpz_class p("1000000007"), q("998244353");
    Prefactor c, d;
    c.multiply_power(Rational(p * q), Affine{0, 1});
    d.multiply_power(Rational(p), Affine{0, 1});
    d.multiply_power(Rational(q), Affine{0, 1});
    EXPECT_EQ(c, d);
    for (double x : {1.0, 2.5}) EXPECT_NEAR(std::abs(a(x) / b(x)), 1.0, 1e-12);
}

TEST(Gaussian, NormalizedMeasure) {
    RMatrix b = mat({{4, 1}, {1, 3}});
    auto leb = integrate_gaussian(gaussian(b), std::vector<std::size_t>{0});
    auto nor = integrate_gaussian(gaussian(b), std::vector<std::size_t>{0}, Measure::normalized);
    RMatrix c = mat({{2}});
    for (double d : {1.0, 3.5})
        EXPECT_NEAR(nor(c, d).real(), leb(c, d).real() * std::pow(2 * pi, -d), 1e-14);
}

TEST(Gaussian, MultShiftsTheForm) {
    auto g = mult(gaussian(mat({{1, 0}, {0, 2}})), Rational(1, 3));
    EXPECT_EQ(g.form, (RMatrix{{Rational(4, 3), 0}, {0, Rational(7, 3)}}));
}

TEST(Gaussian, CauchyCoefficientsOfAnEntireFunction) {
    auto g = integrate_gaussian(gaussian(mat({{3, 1}, {1, 2}})), std::vector<std::size_t>{1});
    RMatrix c = mat({{1}});
    auto s = laurent_extract(g, c, 4, {-3, 4});
    // value = exp(alpha + beta D); the n-th Taylor coefficient at 4 is value(4) beta^n / n!.
    double beta = 0.5 * std::log(pi) - 0.5 * std::log(3.0);
    double at4 = g(c, 4.0).real();
    for (int n = -3; n < 0; ++n) EXPECT_LE(std::abs(s[n]), 1e-10);
    double fact = 1;
    for (int n = 0; n <= 4; ++n) {
        if (n > 0) fact *= n;
        EXPECT_NEAR(s[n].real(), at4 * std::pow(beta, n) / fact, 1e-10 * std::abs(at4));
    }
}

TEST(Gamma, AgainstStdTgamma) {
    for (double x : {0.3, 0.5, 1.0, 2.5, 4.2, -0.5, -1.5, 7.0})
        EXPECT_NEAR(complex_gamma(x).real() / std::tgamma(x), 1.0, 1e-13);
    auto z = complex_gamma({0.5, 1.0}) * complex_gamma({0.5, -1.0});
    EXPECT_NEAR(z.real(), pi / std::cosh(pi), 1e-13);
}

TEST(Quadrature, EndpointSingularity) {
    auto r = integrate_cube(1, [](const double* x, const double*) { return std::complex<double>(std::pow(x[0], -0.75)); });
    EXPECT_NEAR(r.value.real(), 4.0, 1e-9);
    auto line = integrate_real_line(1, [](const double* q) { return std::complex<double>(std::exp(-q[0] * q[0])); });
    EXPECT_NEAR(line.value.real(), std::sqrt(pi), 1e-10);
}

TEST(FeynmanType, ProductAndSumRoundTrip) {
    SchwingerIntegrand f, g;
    f.dim = g.dim = 2;
    f.subspace = g.subspace = {0};
    f.forms = {mat({{1, 0}, {0, 0}}), mat({{1, -1}, {-1, 1}})};
    f.masses2 = {1, 2};
    f.numerator = MultiPolynomial::variable(entry_variable(2, 0, 1));
    g.forms = {mat({{0, 0}, {0, 1}})};
    g.masses2 = {Rational(1, 2)};
    auto p = product(f, g), s = sum(f, g);
    std::mt19937 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        RMatrix a = oracle::random_spd(rng, 2);
        EXPECT_EQ(evaluate_at(p, a), evaluate_at(f, a) * evaluate_at(g, a));
        EXPECT_EQ(evaluate_at(s, a), evaluate_at(f, a) + evaluate_at(g, a));
    }
}

TEST(FeynmanType, DenominatorPolynomialIsTrace) {
    RMatrix b = mat({{2, 1}, {1, 3}}), a = mat({{5, -2}, {-2, 7}});
    EXPECT_EQ(evaluate(denominator_polynomial(2, b, 4), a), trace(a * b) + 4);
}

TEST(Amplitude, SingleEdgeAndBubbleShape) {
    auto e = corpus::load("phi3_bubble");
    auto amp = amplitude(e.theory, e.graph.graph);
    EXPECT_EQ(amp.integrand.forms.size(), 4u);
    EXPECT_EQ(amp.integrand.dim, 2u);
    EXPECT_EQ(amp.integrand.subspace, (std::vector<std::size_t>{0}));
    EXPECT_EQ(amp.couplings.at("g"), 2u);
    // A = Gram matrix of (p, k) in R^2.
    double p[2] = {1, 2}, k[2] = {-1, 3};
    auto dot = [](const double* x, const double* y) { return long(x[0] * y[0] + x[1] * y[1]); };
    RMatrix a = {{Rational(dot(p, p)), Rational(dot(p, k))}, {Rational(dot(p, k)), Rational(dot(k, k))}};
    Rational pp = dot(p, p), kk = dot(k, k), pk = dot(p, k);
    Rational base = 1 / ((pp + 1) * (pp + 1) * (kk + 1));
    Rational v = evaluate_at(amp.integrand, a);
    EXPECT_TRUE(v == base / (kk - 2 * pk + pp + 1) || v == base / (kk + 2 * pk + pp + 1)) << v;
}

TEST(Amplitude, DisjointUnionIsProduct) {
    auto e = corpus::load("phi3_bubble");
    const Graph& g = e.graph.graph;
    std::vector<VertexRecord> vs;
    std::vector<std::tuple<std::string, std::string, std::string>> hs;
    std::vector<std::pair<std::string, std::string>> ps;
    for (std::string suffix : {"", "_2"}) {
        for (auto& v : g.vertices()) vs.push_back({v.id + suffix, v.type});
        for (auto& h : g.halfedges()) hs.emplace_back(h.id + suffix, g.vertices()[h.vertex].id + suffix, h.type);
        for (auto& [x, y] : g.internal_pairs()) ps.emplace_back(g.halfedges()[x].id + suffix, g.halfedges()[y].id + suffix);
    }
    auto both = amplitude(e.theory, Graph::from_ids(vs, hs, ps));
    auto one = amplitude(e.theory, g);
    EXPECT_EQ(both.couplings.at("g"), 4u);
    ASSERT_EQ(both.integrand.dim, 4u);
    std::mt19937 rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        RMatrix a1 = oracle::random_spd(rng, 2), a2 = oracle::random_spd(rng, 2);
        // Coordinates of the union, by name, into the block matrix.
        RMatrix a = zeros(4, 4);
        auto index = [&](const std::string& name) {
            for (std::size_t i = 0; i < 2; ++i)
                if (one.coordinates[i] == name) return std::pair<int, std::size_t>{0, i};
            for (std::size_t i = 0; i < 2; ++i)
                if (one.coordinates[i] + "_2" == name) return std::pair<int, std::size_t>{1, i};
            return std::pair<int, std::size_t>{-1, 0};
        };
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                auto [bi, ii] = index(both.coordinates[i]);
                auto [bj, jj] = index(both.coordinates[j]);
                ASSERT_GE(bi, 0);
                if (bi == bj) a[i][j] = (bi == 0 ? a1 : a2)[ii][jj];
            }
        EXPECT_EQ(evaluate_at(both.integrand, a), evaluate_at(one.integrand, a1) * evaluate_at(one.integrand, a2));
    }
}

TEST(Amplitude, UnsupportedPropagator) {
    Theory t("yukawa", 4, {{"f", 1, 1, false}}, {{"x", {"f", "f"}, {0}, "g"}});
    Graph g = Graph::from_ids({{"a", "x"}, {"b", "x"}}, {{"a1", "a", "f"}, {"a2", "a", "f"}, {"b1", "b", "f"}, {"b2", "b", "f"}},
                              {{"a1", "b1"}});
    try {
        amplitude(t, g);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::unsupported_propagator);
    }
}

TEST(Parametric, GammaOracleAtNegativeD) {
    SchwingerIntegrand s;
    s.dim = 1;
    s.forms = {mat({{1}})};
    s.masses2 = {1};
    EXPECT_NEAR(eval_parametric(s, {}, -1.0).real(), 0.5, 1e-9);
}

TEST(Parametric, BubbleAtThreeDimensions) {
    auto v = eval_parametric(bubble(), {}, 3.0);
    EXPECT_NEAR(v.real() / (pi * pi), 1.0, 1e-6);
    EXPECT_NEAR(v.imag(), 0.0, 1e-9);
}

TEST(Parametric, BubbleDivergesAtFour) {
    try {
        eval_parametric(bubble(), {}, 4.5);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::not_convergent);
    }
}

TEST(Parametric, MassScaling) {
    for (double lam : {2.0, 0.5}) {
        auto s = bubble();
        s.masses2 = {Rational(lam * lam), Rational(lam * lam)};
        double d = 2.6;
        double ratio = eval_parametric(s, {}, d).real() / eval_parametric(bubble(), {}, d).real();
        EXPECT_NEAR(ratio / std::pow(lam, d - 4), 1.0, 1e-8);
    }
}

TEST(Parametric, SingleEdgeInOneDimension) {
    SchwingerIntegrand s;
    s.dim = 1;
    s.forms = {mat({{1}})};
    s.masses2 = {4};
    EXPECT_NEAR(eval_parametric(s, {}, 1.0).real() / (pi / 2), 1.0, 1e-7);
    auto direct = integrate_real_line(1, [](const double* q) { return std::complex<double>(1 / (q[0] * q[0] + 4)); });
    EXPECT_NEAR(direct.value.real() / (pi / 2), 1.0, 1e-7);
}

TEST(Parametric, BubbleWithExternalMomentum) {
    SchwingerIntegrand s;
    s.dim = 2;
    s.subspace = {0};
    s.forms = {mat({{0, 0}, {0, 1}}), mat({{1, -1}, {-1, 1}})};
    s.masses2 = {1, 1};
    const double p2 = 1.5, d = 3.0;
    double feynman = std::pow(pi, d / 2) * std::tgamma(2 - d / 2) *
                     oracle::simpson([&](double x) { return std::pow(1 + x * (1 - x) * p2, d / 2 - 2); }, 0, 1);
    RMatrix c = {{Rational(3, 2)}};
    EXPECT_NEAR(eval_parametric(s, c, d).real() / feynman, 1.0, 1e-7);
}

TEST(Parametric, NumeratorsThroughDerivatives) {
    SchwingerIntegrand s;
    s.dim = 1;
    s.forms = {mat({{1}}), mat({{1}}), mat({{1}})};
    s.masses2 = {1, 1, 1};
    s.numerator = MultiPolynomial::variable(0);
    // int d^Dq q^2a / (q^2+1)^b = pi^{D/2} Gamma(a+D/2) Gamma(b-a-D/2) / (Gamma(D/2) Gamma(b)).
    auto formula = [](double a, double b, double d) {
        return std::pow(pi, d / 2) * std::tgamma(a + d / 2) * std::tgamma(b - a - d / 2) / (std::tgamma(d / 2) * std::tgamma(b));
    };
    EXPECT_NEAR(eval_parametric(s, {}, 1.0).real(), pi / 8, 1e-8);
    EXPECT_NEAR(eval_parametric(s, {}, 2.5).real() / formula(1, 3, 2.5), 1.0, 1e-7);
    s.forms.push_back(mat({{1}}));
    s.masses2.push_back(1);
    s.numerator = MultiPolynomial::variable(0) * MultiPolynomial::variable(0);
    EXPECT_NEAR(eval_parametric(s, {}, 1.0).real(), pi / 16, 1e-8);
}

TEST(Parametric, OffDiagonalNumerator) {
    SchwingerIntegrand s;
    s.dim = 2;
    s.forms = {mat({{1, 0}, {0, 0}}), mat({{1, 0}, {0, 0}}), mat({{0, 0}, {0, 1}}), mat({{0, 0}, {0, 1}})};
    s.masses2 = {1, 1, 1, 1};
    auto a01 = MultiPolynomial::variable(entry_variable(2, 0, 1));
    s.numerator = a01 * a01;
    EXPECT_NEAR(eval_parametric(s, {}, 1.0).real(), pi * pi / 4, 1e-7);
    s.numerator = a01;
    EXPECT_NEAR(std::abs(eval_parametric(s, {}, 1.0)), 0.0, 1e-9);
}

TEST(Laurent, BubbleCoefficients) {
    auto s = laurent_extract(bubble(), {}, 4, {-2, 2});
    EXPECT_NEAR(s[-2].real(), 0.0, 1e-10);
    EXPECT_NEAR(s[-1].real(), -2 * pi * pi, 1e-4);
    EXPECT_NEAR(s[0].real() / (pi * pi * (-euler_gamma - std::log(pi))), 1.0, 1e-4);
    EXPECT_NEAR(s[-1].imag(), 0.0, 1e-10);
}

TEST(Laurent, FishAmplitudeAtZeroMomentumIsTheBubble) {
    auto e = corpus::load("phi4_fish");
    auto amp = amplitude(e.theory, e.graph.graph);
    RMatrix c = zeros(amp.integrand.subspace.size(), amp.integrand.subspace.size());
    auto fish = laurent_extract(amp.integrand, c, 4, {-1, 1});
    auto ref = laurent_extract(bubble(), {}, 4, {-1, 1});
    for (int n = -1; n <= 1; ++n) EXPECT_NEAR(std::abs(fish[n] - ref[n]), 0.0, 1e-9 * std::abs(ref[n]));
}

TEST(Laurent, ConvergentIntegrandHasNoPole) {
    SchwingerIntegrand s;
    s.dim = 1;
    s.forms = {mat({{1}})};
    s.masses2 = {9};
    auto l = laurent_extract(s, {}, 1, {-2, 1});
    EXPECT_LE(std::abs(l[-1]), 1e-10);
    EXPECT_NEAR(l[0].real(), pi / 3, 1e-9);
}

TEST(Laurent, SubdivergenceIsReported) {
    // A bubble sitting inside a convergent outer loop at d = 4 through a degenerate pair of forms.
    SchwingerIntegrand s;
    s.dim = 2;
    s.forms = {mat({{1, 0}, {0, 0}}), mat({{1, 0}, {0, 0}}), mat({{0, 0}, {0, 1}})};
    s.masses2 = {1, 1, 1};
    try {
        laurent_extract(s, {}, 4);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::continuation_not_implemented);
    }
}
