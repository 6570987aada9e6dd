#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include "feynhopf/error.hpp"
#include "feynhopf/special.hpp"

namespace feynhopf {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    std::size_t max_nodes = std::size_t(1) << 20;
    double t_max = 4.5;
};

struct QuadratureResult {
    std::complex<double> value;
    double rel_change = 0;
    std::size_t nodes = 0;
    bool converged = false;
};

/// Integrand on the unit cube, given both x and 1 - x for every coordinate.
using CubeIntegrand = std::function<std::complex<double>(const double* x, const double* xc)>;

namespace detail {

/// x = 1/(1 + exp(-pi sinh t)), dx/dt = pi cosh t * x * (1 - x).
struct Node {
    double x, xc, w;
};

inline Node tanh_sinh_node(double t) {
    double u = std::numbers::pi * std::sinh(t);
    double x = 1.0 / (1.0 + std::exp(-u)), xc = 1.0 / (1.0 + std::exp(u));
    return {x, xc, std::numbers::pi * std::cosh(t) * x * xc};
}

struct Nested {
    std::size_t dims;
    const CubeIntegrand& f;
    const QuadratureOptions& opt;
    std::vector<double> x, xc;
    std::size_t evaluations = 0;
    bool converged = true;
    double worst = 0;

    /// Integrates coordinate `level` by step halving; inner coordinates are integrated recursively at every node.
    std::complex<double> run(std::size_t level) {
        if (level == dims) {
            ++evaluations;
            return f(x.data(), xc.data());
        }
        auto add_nodes = [&](double h, long k_step, long k_first) {
            std::vector<std::complex<double>> terms;
            const long k_max = static_cast<long>(std::floor(opt.t_max / h));
            for (long k = k_first; k <= k_max; k += k_step) {
                for (long sign : {1L, -1L}) {
                    if (k == 0 && sign < 0) continue;
                    Node n = tanh_sinh_node(double(sign * k) * h);
                    if (n.x == 0.0 || n.xc == 0.0 || n.w == 0.0) continue;
                    x[level] = n.x;
                    xc[level] = n.xc;
                    terms.push_back(n.w * run(level + 1));
                }
            }
            return pairwise_sum(terms.data(), terms.size());
        };
        double h = 1;
        std::complex<double> raw = add_nodes(h, 1, 0), value = h * raw, prev = value;
        for (int lev = 1;; ++lev) {
            if (evaluations > opt.max_nodes) {
                converged = false;
                return value;
            }
            h /= 2;
            raw += add_nodes(h, 2, 1);
            value = h * raw;
            double change = std::abs(value - prev) / std::max(std::abs(value), 1e-300);
            if (lev >= 2 && (change < std::sqrt(opt.rel_tol) || value == prev)) {
                worst = std::max(worst, change * change);
                return value;
            }
            prev = value;
        }
    }
};

}  // namespace detail

/// Product tanh-sinh on (0,1)^dims; each coordinate halves its step until the relative change is below
/// sqrt(rel_tol), which for the double-exponential rule leaves an error of order rel_tol. Refinement stops
/// once max_nodes integrand evaluations are spent.
inline QuadratureResult integrate_cube(std::size_t dims, const CubeIntegrand& f, const QuadratureOptions& opt = {}) {
    detail::Nested nested{dims, f, opt, std::vector<double>(dims), std::vector<double>(dims)};
    QuadratureResult r;
    r.value = nested.run(0);
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
        fail(errc::quadrature_failure, "integrand produced a non-finite value");
    r.nodes = nested.evaluations;
    r.converged = nested.converged;
    r.rel_change = nested.worst;
    return r;
}

/// Same on (0,inf)^dims through t = x / (1 - x).
inline QuadratureResult integrate_positive_orthant(std::size_t dims,
                                                   const std::function<std::complex<double>(const double* t)>& f,
                                                   const QuadratureOptions& opt = {}) {
    std::vector<double> t(dims);
    return integrate_cube(
        dims,
        [&](const double* x, const double* xc) {
            for (std::size_t i = 0; i < dims; ++i) t[i] = x[i] / xc[i];
            std::complex<double> v = f(t.data());
            for (std::size_t i = 0; i < dims && v != 0.0; ++i) v /= xc[i] * xc[i];
            return v;
        },
        opt);
}

/// Same on the real line through q = t - 1/t, t = x / (1 - x).
inline QuadratureResult integrate_real_line(std::size_t dims,
                                            const std::function<std::complex<double>(const double* q)>& f,
                                            const QuadratureOptions& opt = {}) {
    std::vector<double> q(dims);
    return integrate_cube(
        dims,
        [&](const double* x, const double* xc) {
            double jac = 1;
            for (std::size_t i = 0; i < dims; ++i) {
                double t = x[i] / xc[i];
                q[i] = t - 1 / t;
                jac *= (1 + 1 / (t * t)) / (xc[i] * xc[i]);
            }
            return jac * f(q.data());
        },
        opt);
}

}  // namespace feynhopf
