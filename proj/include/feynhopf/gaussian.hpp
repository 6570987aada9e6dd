#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "feynhopf/linalg.hpp"

namespace feynhopf {

/// a + bD with rational a, b.
struct Affine {
    Rational a = 0;
    Rational b = 0;

    std::complex<double> operator()(std::complex<double> d) const { return a.get_d() + b.get_d() * d; }
    Affine& operator+=(const Affine& o) {
        a += o.a;
        b += o.b;
        return *this;
    }
    bool operator==(const Affine&) const = default;
    bool is_zero() const { return feynhopf::is_zero(a) && feynhopf::is_zero(b); }
};

inline std::string to_string(const Affine& e) {
    if (is_zero(e.b)) return to_string(e.a);
    std::string lin = (e.b == 1 ? std::string() : to_string(e.b) + "*") + "D";
    return is_zero(e.a) ? lin : to_string(e.a) + " + " + lin;
}

namespace detail {

/// Inserts n^e into a map whose bases are pairwise coprime, splitting bases by gcd until they stay coprime.
inline void refine_insert(std::map<mpz_class, Affine>& basis, const mpz_class& n, const Affine& e) {
    std::vector<std::pair<mpz_class, Affine>> queue{{n, e}};
    while (!queue.empty()) {
        auto [x, ex] = queue.back();
        queue.pop_back();
        if (x == 1 || ex.is_zero()) continue;
        bool split = false;
        for (auto it = basis.begin(); it != basis.end(); ++it) {
            mpz_class g = gcd(x, it->first);
            if (g == 1) continue;
            auto [b, eb] = *it;
            basis.erase(it);
            Affine sum = ex;
            sum += eb;
            queue.push_back({g, sum});
            queue.push_back({mpz_class(b / g), eb});
            queue.push_back({mpz_class(x / g), ex});
            split = true;
            break;
        }
        if (!split) basis.emplace(x, ex);
    }
    for (auto it = basis.begin(); it != basis.end();) it = it->second.is_zero() ? basis.erase(it) : std::next(it);
}

}  // namespace detail

/// pi^{pi_exponent(D)} * prod base^{exponent(D)} with pairwise coprime integer bases. Equal values can have
/// different bases, so equality refines both sides against each other.
struct Prefactor {
    Affine pi_exponent;
    std::map<mpz_class, Affine> det_factors;

    void multiply_power(const Rational& base, const Affine& e) {
        if (sgn(base) <= 0) fail(errc::invalid_argument, "prefactor base must be positive");
        detail::refine_insert(det_factors, base.get_num(), e);
        detail::refine_insert(det_factors, base.get_den(), Affine{-e.a, -e.b});
    }

    std::complex<double> operator()(std::complex<double> d) const {
        std::complex<double> log = pi_exponent(d) * std::log(std::numbers::pi);
        for (auto& [p, e] : det_factors) log += e(d) * std::log(p.get_d());
        return std::exp(log);
    }

    friend bool operator==(const Prefactor& x, const Prefactor& y) {
        if (!(x.pi_exponent == y.pi_exponent)) return false;
        auto merged = x.det_factors;
        for (auto& [b, e] : y.det_factors) detail::refine_insert(merged, b, Affine{-e.a, -e.b});
        return merged.empty();
    }
};

inline std::string to_string(const Prefactor& p) {
    std::string s = "pi^(" + to_string(p.pi_exponent) + ")";
    for (auto& [base, e] : p.det_factors) s += " * " + base.get_str() + "^(" + to_string(e) + ")";
    return s;
}

/// The function C -> prefactor(D) * exp(-tr(C * form)) on forms over `space`.
struct GaussianElement {
    std::vector<std::string> space;
    Prefactor prefactor;
    RMatrix form;

    std::complex<double> operator()(const RMatrix& c, std::complex<double> d) const {
        return prefactor(d) * std::exp(-trace(c * form).get_d());
    }

    friend bool operator==(const GaussianElement& x, const GaussianElement& y) {
        return x.space == y.space && x.form == y.form && x.prefactor == y.prefactor;
    }
};

/// phi_B on a space with default labels 0..n-1.
inline GaussianElement gaussian(const RMatrix& b, std::vector<std::string> space = {}) {
    if (!is_symmetric(b)) fail(errc::invalid_argument, "Gaussian form must be symmetric");
    if (space.empty())
        for (std::size_t i = 0; i < b.size(); ++i) space.push_back(std::to_string(i));
    if (space.size() != b.size()) fail(errc::invalid_argument, "space labels do not match form size");
    return {std::move(space), {}, b};
}

enum class Measure { lebesgue, normalized };

/// I^D_{E,F} on a Gaussian: F is given by coordinate indices into g.space.
inline GaussianElement integrate_gaussian(const GaussianElement& g, const std::vector<std::size_t>& f,
                                          Measure measure = Measure::lebesgue) {
    if (!is_positive_definite(g.form)) fail(errc::not_positive_definite, "Gaussian form is not positive definite");
    auto split = schur_split(g.form, f);
    GaussianElement out;
    for (auto i : f) out.space.push_back(g.space[i]);
    out.prefactor = g.prefactor;
    out.form = split.f_star;
    const long k = static_cast<long>(g.form.size() - f.size());
    if (k == 0) return out;
    out.prefactor.pi_exponent += Affine{0, rational(k, 2)};
    out.prefactor.multiply_power(determinant(split.f_perp), Affine{0, Rational(-1, 2)});
    if (measure == Measure::normalized) {
        out.prefactor.pi_exponent += Affine{0, -k};
        out.prefactor.multiply_power(2, Affine{0, -k});
    }
    return out;
}

/// Same, with F given by labels of g.space (order taken from `target`).
inline GaussianElement integrate_gaussian(const GaussianElement& g, const std::vector<std::string>& target,
                                          Measure measure = Measure::lebesgue) {
    std::vector<std::size_t> f;
    for (auto& l : target) {
        std::size_t i = 0;
        while (i < g.space.size() && g.space[i] != l) ++i;
        if (i == g.space.size()) fail(errc::invalid_argument, "label '" + l + "' is not a coordinate of the space");
        f.push_back(i);
    }
    return integrate_gaussian(g, f, measure);
}

/// Integrating E -> G directly agrees with E -> F -> G. `g` indexes into `f`'s coordinates as labels of E.
inline bool compose_check(const RMatrix& b, const std::vector<std::size_t>& f, const std::vector<std::size_t>& g,
                          Measure measure = Measure::lebesgue) {
    GaussianElement phi = gaussian(b);
    std::vector<std::string> fl, gl;
    for (auto i : f) fl.push_back(phi.space.at(i));
    for (auto i : g) gl.push_back(phi.space.at(i));
    return integrate_gaussian(phi, gl, measure) == integrate_gaussian(integrate_gaussian(phi, fl, measure), gl, measure);
}

/// Multiplication by exp(-lambda tr C): form M becomes M + lambda I.
inline GaussianElement mult(GaussianElement g, const Rational& lambda) {
    for (std::size_t i = 0; i < g.form.size(); ++i) g.form[i][i] += lambda;
    return g;
}

}  // namespace feynhopf
