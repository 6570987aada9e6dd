#pragma once

// Reference computations that share no code with the library's numerics.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "feynhopf/linalg.hpp"

namespace oracle {

using feynhopf::RMatrix;
using feynhopf::Rational;

/// M^T M + I/2 with small rational entries: symmetric positive definite, smallest eigenvalue >= 1/2.
inline RMatrix random_spd(std::mt19937& rng, std::size_t n) {
    RMatrix m(n, std::vector<Rational>(n));
    for (auto& row : m)
        for (auto& x : row) x = feynhopf::rational(static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 3) + 1);
    RMatrix b(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) b[i][j] += m[k][i] * m[k][j];
            if (i == j) b[i][j] += Rational(1, 2);
        }
    return b;
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(a + i * h);
    return s * h / 3;
}

/// int exp(-q^T B q) over the coordinates outside F, with q restricted to k on F, by the trapezoid rule.
inline double gaussian_slice(const RMatrix& b, const std::vector<std::size_t>& f, const std::vector<double>& k,
                             double range = 10, double h = 0.1) {
    const std::size_t n = b.size();
    std::vector<double> q(n, 0.0);
    std::vector<bool> fixed(n, false);
    for (std::size_t i = 0; i < f.size(); ++i) {
        q[f[i]] = k[i];
        fixed[f[i]] = true;
    }
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i)
        if (!fixed[i]) free.push_back(i);
    std::vector<std::vector<double>> bd(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) bd[i][j] = b[i][j].get_d();
    const int steps = static_cast<int>(std::lround(2 * range / h));
    std::function<double(std::size_t)> rec = [&](std::size_t level) -> double {
        if (level == free.size()) {
            double e = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) e += q[i] * bd[i][j] * q[j];
            return std::exp(-e);
        }
        double s = 0;
        for (int i = 0; i <= steps; ++i) {
            q[free[level]] = -range + i * h;
            s += rec(level + 1);
        }
        return s * h;
    };
    return rec(0);
}

}  // namespace oracle
