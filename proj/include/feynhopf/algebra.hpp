#pragma once

#include <algorithm>
#include <array>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "feynhopf/rational.hpp"

namespace feynhopf {

/// Sorted multiset of generator keys; the empty monomial is the unit.
using Monomial = std::vector<std::string>;

inline Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::string render(const Monomial& m) {
    std::string s = "[";
    for (std::size_t k = 0; k < m.size(); ++k) s += (k ? ", " : "") + m[k];
    return s + "]";
}

/// Finite formal sum over a key type with exact coefficients; zero terms are never stored.
template <class Key>
class FormalSum {
public:
    using map_type = std::map<Key, Rational>;

    FormalSum() = default;
    FormalSum(const Key& k, const Rational& c = 1) { add(k, c); }

    void add(const Key& k, const Rational& c) {
        if (is_zero(c)) return;
        auto [it, fresh] = terms_.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }

    const map_type& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    FormalSum& operator+=(const FormalSum& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    FormalSum& operator-=(const FormalSum& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
    friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
    friend FormalSum operator*(const Rational& s, const FormalSum& a) {
        FormalSum out;
        for (const auto& [k, c] : a.terms_) out.add(k, s * c);
        return out;
    }
    friend bool operator==(const FormalSum& a, const FormalSum& b) { return a.terms_ == b.terms_; }

private:
    map_type terms_;
};

using Element = FormalSum<Monomial>;
using TensorKey = std::pair<Monomial, Monomial>;
using Tensor = FormalSum<TensorKey>;
using Tensor3 = FormalSum<std::array<Monomial, 3>>;

inline Element operator*(const Element& a, const Element& b) {
    Element out;
    for (const auto& [x, c] : a.terms())
        for (const auto& [y, d] : b.terms()) out.add(x * y, c * d);
    return out;
}

inline Tensor operator*(const Tensor& a, const Tensor& b) {
    Tensor out;
    for (const auto& [x, c] : a.terms())
        for (const auto& [y, d] : b.terms()) out.add({x.first * y.first, x.second * y.second}, c * d);
    return out;
}

/// (Delta x id) applied to a tensor, with Delta given on monomials.
template <class Delta>
Tensor3 apply_left(const Tensor& t, Delta&& delta) {
    Tensor3 out;
    for (const auto& [k, c] : t.terms()) {
        const Tensor dk = delta(k.first);
        for (const auto& [d, e] : dk.terms()) out.add({d.first, d.second, k.second}, c * e);
    }
    return out;
}

/// (id x Delta) applied to a tensor.
template <class Delta>
Tensor3 apply_right(const Tensor& t, Delta&& delta) {
    Tensor3 out;
    for (const auto& [k, c] : t.terms()) {
        const Tensor dk = delta(k.second);
        for (const auto& [d, e] : dk.terms()) out.add({k.first, d.first, d.second}, c * e);
    }
    return out;
}

/// Drops the generators `is_unit` marks, which is the projection onto the quotient by 1 - g.
template <class Pred>
Monomial drop_units(const Monomial& m, Pred&& is_unit) {
    Monomial out;
    for (const auto& k : m)
        if (!is_unit(k)) out.push_back(k);
    return out;
}

template <class Pred>
Element quotient(const Element& x, Pred&& is_unit) {
    Element out;
    for (const auto& [m, c] : x.terms()) out.add(drop_units(m, is_unit), c);
    return out;
}

template <class Pred>
Tensor quotient(const Tensor& x, Pred&& is_unit) {
    Tensor out;
    for (const auto& [k, c] : x.terms()) out.add({drop_units(k.first, is_unit), drop_units(k.second, is_unit)}, c);
    return out;
}

/// One line per term, `coeff * [a, b] ⊗ [c]`, in key order.
inline std::string render(const Tensor& t) {
    std::ostringstream os;
    for (const auto& [k, c] : t.terms()) os << to_string(c) << " * " << render(k.first) << " ⊗ " << render(k.second) << "\n";
    return os.str();
}

inline std::string render(const Element& x) {
    std::ostringstream os;
    for (const auto& [m, c] : x.terms()) os << to_string(c) << " * " << render(m) << "\n";
    return os.str();
}

}  // namespace feynhopf
