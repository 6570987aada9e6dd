#pragma once

#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "feynhopf/rational.hpp"

namespace feynhopf {

/// Polynomial in variables v_0, v_1, ... with exact coefficients, keyed by exponent vectors
/// (trailing zeros trimmed so that equal monomials have equal keys).
class MultiPolynomial {
public:
    using Exponent = std::vector<unsigned>;

    MultiPolynomial() = default;
    MultiPolynomial(const Rational& c) { add({}, c); }

    /// The variable v_k.
    static MultiPolynomial variable(std::size_t k) {
        Exponent e(k + 1, 0);
        e[k] = 1;
        MultiPolynomial p;
        p.add(e, 1);
        return p;
    }

    void add(Exponent e, const Rational& c) {
        while (!e.empty() && e.back() == 0) e.pop_back();
        if (is_zero(c)) return;
        auto [it, fresh] = terms_.emplace(std::move(e), c);
        if (!fresh) {
            it->second += c;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }

    const std::map<Exponent, Rational>& terms() const noexcept { return terms_; }
    bool zero() const noexcept { return terms_.empty(); }

    static unsigned degree(const Exponent& e) {
        unsigned d = 0;
        for (auto x : e) d += x;
        return d;
    }
    /// Total degree; -1 for the zero polynomial.
    long degree() const {
        long d = -1;
        for (const auto& [e, c] : terms_) d = std::max<long>(d, degree(e));
        return d;
    }

    friend MultiPolynomial operator+(MultiPolynomial a, const MultiPolynomial& b) {
        for (const auto& [e, c] : b.terms_) a.add(e, c);
        return a;
    }
    friend MultiPolynomial operator-(MultiPolynomial a, const MultiPolynomial& b) {
        for (const auto& [e, c] : b.terms_) a.add(e, -c);
        return a;
    }
    MultiPolynomial operator-() const { return MultiPolynomial() - *this; }
    MultiPolynomial& operator+=(const MultiPolynomial& o) { return *this = *this + o; }
    MultiPolynomial& operator-=(const MultiPolynomial& o) { return *this = *this - o; }

    /// Product keeping only total degree <= max_degree.
    static MultiPolynomial multiply(const MultiPolynomial& a, const MultiPolynomial& b, long max_degree) {
        MultiPolynomial out;
        for (const auto& [x, c] : a.terms_)
            for (const auto& [y, d] : b.terms_) {
                if (static_cast<long>(degree(x) + degree(y)) > max_degree) continue;
                Exponent e(std::max(x.size(), y.size()), 0);
                for (std::size_t k = 0; k < x.size(); ++k) e[k] += x[k];
                for (std::size_t k = 0; k < y.size(); ++k) e[k] += y[k];
                out.add(std::move(e), c * d);
            }
        return out;
    }
    friend MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b) {
        return multiply(a, b, std::numeric_limits<long>::max());
    }
    MultiPolynomial& operator*=(const MultiPolynomial& o) { return *this = *this * o; }

    friend bool operator==(const MultiPolynomial& a, const MultiPolynomial& b) { return a.terms_ == b.terms_; }

    std::string render() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            os << (first ? "" : " + ") << to_string(c);
            for (std::size_t k = 0; k < e.size(); ++k)
                if (e[k]) os << "*v" << k << (e[k] > 1 ? "^" + std::to_string(e[k]) : "");
            first = false;
        }
        return os.str();
    }

private:
    std::map<Exponent, Rational> terms_;
};

inline bool is_zero(const MultiPolynomial& p) { return p.zero(); }
inline std::string to_string(const MultiPolynomial& p) { return p.render(); }

/// Order-m Taylor operator at 0: for a polynomial, the terms of total degree <= m.
inline MultiPolynomial taylor_pm(unsigned m, const MultiPolynomial& f) {
    MultiPolynomial out;
    for (const auto& [e, c] : f.terms())
        if (MultiPolynomial::degree(e) <= m) out.add(e, c);
    return out;
}

}  // namespace feynhopf
