#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "feynhopf/rational.hpp"

namespace feynhopf {

inline bool is_zero(const std::complex<double>& z) { return z == std::complex<double>(0.0, 0.0); }
inline bool is_zero(double x) { return x == 0.0; }

inline std::string to_string(const std::complex<double>& z) {
    std::ostringstream os;
    os.precision(12);
    if (z.imag() == 0.0) os << z.real();
    else os << "(" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i)";
    return os.str();
}

/// Formal Laurent series sum_{n >= min_order} a_n z^n in z = D - d. Coefficients are trusted up to
/// `trunc` inclusive; `exact` marks a series known in full.
template <class R>
class LaurentSeries {
public:
    static constexpr int exact = std::numeric_limits<int>::max();

    LaurentSeries() = default;
    LaurentSeries(R constant) : min_order_(0), coeffs_{std::move(constant)} { normalize(); }
    LaurentSeries(int min_order, std::vector<R> coeffs, int trunc = exact)
        : min_order_(min_order), coeffs_(std::move(coeffs)), trunc_(trunc) {
        normalize();
    }

    /// c z^n.
    static LaurentSeries monomial(int n, R c) { return LaurentSeries(n, {std::move(c)}); }

    bool zero() const noexcept { return coeffs_.empty(); }
    int min_order() const noexcept { return min_order_; }
    int max_order() const noexcept { return min_order_ + static_cast<int>(coeffs_.size()) - 1; }
    int trunc() const noexcept { return trunc_; }
    bool is_exact() const noexcept { return trunc_ == exact; }
    const std::vector<R>& coefficients() const noexcept { return coeffs_; }

    R operator[](int n) const {
        if (n > trunc_)
            fail(errc::truncation_underflow,
                 "coefficient of z^" + std::to_string(n) + " lies beyond truncation order " + std::to_string(trunc_));
        if (zero() || n < min_order_ || n > max_order()) return R(0);
        return coeffs_[static_cast<std::size_t>(n - min_order_)];
    }

    /// Drops orders above k and records k as the reliability bound.
    LaurentSeries truncated(int k) const {
        std::vector<R> c;
        for (int n = min_order_; n <= std::min(k, max_order()); ++n) c.push_back((*this)[n]);
        return LaurentSeries(min_order_, std::move(c), std::min(k, trunc_));
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, false); }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, true); }
    LaurentSeries operator-() const { return LaurentSeries() - *this; }
    LaurentSeries& operator+=(const LaurentSeries& o) { return *this = *this + o; }
    LaurentSeries& operator-=(const LaurentSeries& o) { return *this = *this - o; }

    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
        int trunc = exact;
        if (!a.is_exact()) trunc = std::min(trunc, a.trunc_ + (b.zero() ? 0 : b.min_order_));
        if (!b.is_exact()) trunc = std::min(trunc, b.trunc_ + (a.zero() ? 0 : a.min_order_));
        if (a.zero() || b.zero()) return LaurentSeries(0, {}, trunc);
        std::vector<R> c(a.coeffs_.size() + b.coeffs_.size() - 1, R(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        LaurentSeries out(a.min_order_ + b.min_order_, std::move(c), trunc);
        return trunc == exact ? out : out.truncated(trunc);
    }
    LaurentSeries& operator*=(const LaurentSeries& o) { return *this = *this * o; }

    friend LaurentSeries operator*(const R& s, const LaurentSeries& a) {
        std::vector<R> c;
        for (const auto& x : a.coeffs_) c.push_back(s * x);
        return LaurentSeries(a.min_order_, std::move(c), a.trunc_);
    }

    /// Equality of the trusted coefficients.
    friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
        if (a.trunc_ != b.trunc_) return false;
        int lo = std::min(a.zero() ? 0 : a.min_order_, b.zero() ? 0 : b.min_order_);
        int hi = std::max(a.zero() ? 0 : a.max_order(), b.zero() ? 0 : b.max_order());
        for (int n = lo; n <= hi; ++n)
            if (n <= a.trunc_ && !is_zero(R(a[n] - b[n]))) return false;
        return true;
    }

    /// Part with strictly negative orders (the minimal-subtraction projector P).
    LaurentSeries negative_part() const {
        std::vector<R> c;
        for (int n = min_order_; n < 0 && n <= max_order(); ++n) c.push_back((*this)[n]);
        return LaurentSeries(min_order_, std::move(c), trunc_);
    }
    /// (I - P).
    LaurentSeries regular_part() const { return *this - negative_part(); }

    std::string render() const {
        std::ostringstream os;
        bool first = true;
        for (int n = min_order_; n <= max_order() && !zero(); ++n) {
            R c = (*this)[n];
            if (is_zero(c)) continue;
            os << (first ? "" : " + ") << to_string(c);
            if (n != 0) os << " z^" << n;
            first = false;
        }
        if (first) os << "0";
        if (!is_exact()) os << " [trunc " << trunc_ << "]";
        return os.str();
    }

private:
    static LaurentSeries combine(const LaurentSeries& a, const LaurentSeries& b, bool subtract) {
        int trunc = std::min(a.trunc_, b.trunc_);
        if (a.zero() && b.zero()) return LaurentSeries(0, {}, trunc);
        int lo = std::min(a.zero() ? b.min_order_ : a.min_order_, b.zero() ? a.min_order_ : b.min_order_);
        int hi = std::max(a.zero() ? b.max_order() : a.max_order(), b.zero() ? a.max_order() : b.max_order());
        if (trunc != exact) hi = std::min(hi, trunc);
        std::vector<R> c;
        for (int n = lo; n <= hi; ++n) {
            R x = a.raw(n), y = b.raw(n);
            c.push_back(subtract ? R(x - y) : R(x + y));
        }
        return LaurentSeries(lo, std::move(c), trunc);
    }

    R raw(int n) const {
        if (zero() || n < min_order_ || n > max_order()) return R(0);
        return coeffs_[static_cast<std::size_t>(n - min_order_)];
    }

    void normalize() {
        if (trunc_ != exact && !coeffs_.empty() && max_order() > trunc_) coeffs_.resize(static_cast<std::size_t>(trunc_ - min_order_ + 1 > 0 ? trunc_ - min_order_ + 1 : 0));
        std::size_t lead = 0;
        while (lead < coeffs_.size() && is_zero(coeffs_[lead])) ++lead;
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
        min_order_ += static_cast<int>(lead);
        while (!coeffs_.empty() && is_zero(coeffs_.back())) coeffs_.pop_back();
        if (coeffs_.empty()) min_order_ = 0;
    }

    int min_order_ = 0;
    std::vector<R> coeffs_;
    int trunc_ = exact;
};

template <class R>
bool is_zero(const LaurentSeries<R>& s) {
    return s.zero();
}

/// (P(s), (I - P)(s)) for the minimal scheme.
template <class R>
std::pair<LaurentSeries<R>, LaurentSeries<R>> minimal_split(const LaurentSeries<R>& s) {
    return {s.negative_part(), s.regular_part()};
}

/// Default window for series that are not exact.
struct Window {
    int min = -6;
    int max = 6;
};

}  // namespace feynhopf
