#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace feynhopf {

/// Complex Gamma by Lanczos (g = 7, 9 terms) with reflection for Re z < 1/2.
inline std::complex<double> complex_gamma(std::complex<double> z) {
    using std::numbers::pi;
    static constexpr std::array<double, 9> c{0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
                                             771.32342877765313,   -176.61502916214059, 12.507343278686905,
                                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * complex_gamma(1.0 - z));
    z -= 1.0;
    std::complex<double> x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i));
    std::complex<double> t = z + 7.5;
    return std::sqrt(2 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

/// Pairwise sum in a fixed tree order.
template <class T>
T pairwise_sum(const T* v, std::size_t n) {
    if (n == 0) return T(0);
    if (n <= 8) {
        T s = v[0];
        for (std::size_t i = 1; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}  // namespace feynhopf
