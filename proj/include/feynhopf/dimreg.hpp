#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "feynhopf/gaussian.hpp"
#include "feynhopf/laurent.hpp"
#include "feynhopf/polynomial.hpp"
#include "feynhopf/quadrature.hpp"
#include "feynhopf/special.hpp"
#include "feynhopf/theory.hpp"

namespace feynhopf {

/// Index of the numerator variable a_pq (p <= q) among the n(n+1)/2 upper-triangular entries.
inline std::size_t entry_variable(std::size_t n, std::size_t p, std::size_t q) {
    if (p > q) std::swap(p, q);
    if (q >= n) fail(errc::invalid_argument, "numerator entry outside the space");
    return p * n - p * (p - 1) / 2 + (q - p);
}

inline std::pair<std::size_t, std::size_t> entry_of_variable(std::size_t n, std::size_t k) {
    for (std::size_t p = 0; p < n; ++p) {
        if (k < n - p) return {p, p + k};
        k -= n - p;
    }
    fail(errc::invalid_argument, "numerator variable outside the space");
}

/// f(A) = P(A) / prod_j (tr(A B_j) + m_j^2) on forms over a space of dimension `dim`,
/// to be integrated down to the coordinate subspace `subspace`.
struct SchwingerIntegrand {
    std::size_t dim = 0;
    std::vector<std::size_t> subspace;
    std::vector<RMatrix> forms;
    std::vector<Rational> masses2;
    MultiPolynomial numerator = Rational(1);

    bool operator==(const SchwingerIntegrand&) const = default;
};

inline constexpr long max_numerator_degree = 4;

inline void validate(const SchwingerIntegrand& s) {
    complement(s.dim, s.subspace);
    if (s.forms.size() != s.masses2.size()) fail(errc::invalid_argument, "one mass per form is required");
    RMatrix sum = zeros(s.dim, s.dim);
    for (std::size_t j = 0; j < s.forms.size(); ++j) {
        const auto& b = s.forms[j];
        if (b.size() != s.dim || !is_positive_semidefinite(b))
            fail(errc::not_positive_definite, "form " + std::to_string(j) + " is not a positive semidefinite " +
                                                  std::to_string(s.dim) + "x" + std::to_string(s.dim) + " matrix");
        if (sgn(s.masses2[j]) <= 0) fail(errc::invalid_argument, "masses must be strictly positive");
        sum = sum + b;
    }
    if (!is_positive_definite(sum)) fail(errc::not_positive_definite, "B(t) is not positive definite at t = (1,...,1)");
    if (s.numerator.degree() > max_numerator_degree)
        fail(errc::invalid_argument, "numerator degree exceeds " + std::to_string(max_numerator_degree));
    for (auto& [e, c] : s.numerator.terms())
        if (e.size() > s.dim * (s.dim + 1) / 2) fail(errc::invalid_argument, "numerator variable outside the space");
}

/// tr(A B) + m^2 as a degree-one polynomial in the entries a_pq.
inline MultiPolynomial denominator_polynomial(std::size_t n, const RMatrix& b, const Rational& m2) {
    MultiPolynomial p = m2;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Rational c = i == j ? b[i][j] : 2 * b[i][j];
            if (!is_zero(c)) p = p + c * MultiPolynomial::variable(entry_variable(n, i, j));
        }
    return p;
}

inline Rational evaluate(const MultiPolynomial& p, const RMatrix& a) {
    const std::size_t n = a.size();
    Rational total = 0;
    for (auto& [e, c] : p.terms()) {
        Rational term = c;
        for (std::size_t k = 0; k < e.size(); ++k) {
            auto [i, j] = entry_of_variable(n, k);
            for (unsigned r = 0; r < e[k]; ++r) term *= a[i][j];
        }
        total += term;
    }
    return total;
}

/// f(A) exactly, for a symmetric rational A.
inline Rational evaluate_at(const SchwingerIntegrand& s, const RMatrix& a) {
    Rational v = evaluate(s.numerator, a);
    for (std::size_t j = 0; j < s.forms.size(); ++j) v /= trace(a * s.forms[j]) + s.masses2[j];
    return v;
}

inline void check_compatible(const SchwingerIntegrand& f, const SchwingerIntegrand& g) {
    if (f.dim != g.dim || f.subspace != g.subspace)
        fail(errc::invalid_argument, "Feynman-type functions live on different spaces");
}

inline SchwingerIntegrand product(const SchwingerIntegrand& f, const SchwingerIntegrand& g) {
    check_compatible(f, g);
    SchwingerIntegrand out = f;
    out.forms.insert(out.forms.end(), g.forms.begin(), g.forms.end());
    out.masses2.insert(out.masses2.end(), g.masses2.begin(), g.masses2.end());
    out.numerator = f.numerator * g.numerator;
    return out;
}

/// Common-denominator sum.
inline SchwingerIntegrand sum(const SchwingerIntegrand& f, const SchwingerIntegrand& g) {
    check_compatible(f, g);
    auto denominator = [](const SchwingerIntegrand& s) {
        MultiPolynomial p = Rational(1);
        for (std::size_t j = 0; j < s.forms.size(); ++j) p = p * denominator_polynomial(s.dim, s.forms[j], s.masses2[j]);
        return p;
    };
    SchwingerIntegrand out = product(f, g);
    out.numerator = f.numerator * denominator(g) + g.numerator * denominator(f);
    return out;
}

/// Feynman rules: an integrand on the independent momenta of `g`, external coordinates first.
struct Amplitude {
    SchwingerIntegrand integrand;
    std::vector<std::string> coordinates;     // "p:<halfedge>" or "k:<halfedge>"
    std::vector<bool> external_factor;        // per form
    std::map<std::string, unsigned> couplings;  // coupling label -> power
};

inline Amplitude amplitude(const Theory& t, const Graph& g) {
    check_in_theory(t, g);
    Amplitude amp;
    for (const auto& v : g.vertices()) ++amp.couplings[t.resolve(v.type).first->coupling];

    // Internal edges through a spanning forest; chords carry loop momenta.
    auto pairs = g.internal_pairs();
    const std::size_t nv = g.vertex_count();
    detail::UnionFind uf(nv);
    std::vector<bool> tree(pairs.size(), false);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
        std::size_t a = g.halfedges()[pairs[e].first].vertex, b = g.halfedges()[pairs[e].second].vertex;
        tree[e] = uf.unite(a, b);
    }
    Components comps = components(g);
    std::vector<std::vector<std::size_t>> legs_of(comps.count);
    for (std::size_t h = 0; h < g.halfedges().size(); ++h)
        if (g.is_external(h)) legs_of[comps.of_vertex[g.halfedges()[h].vertex]].push_back(h);

    std::vector<std::size_t> leg_coord(g.halfedges().size(), SIZE_MAX);
    for (auto& legs : legs_of)
        for (std::size_t i = 0; i + 1 < legs.size(); ++i) {
            leg_coord[legs[i]] = amp.coordinates.size();
            amp.coordinates.push_back("p:" + g.halfedges()[legs[i]].id);
        }
    const std::size_t m = amp.coordinates.size();
    std::vector<std::size_t> chord_coord(pairs.size(), SIZE_MAX);
    for (std::size_t e = 0; e < pairs.size(); ++e)
        if (!tree[e]) {
            chord_coord[e] = amp.coordinates.size();
            amp.coordinates.push_back("k:" + g.halfedges()[pairs[e].first].id);
        }
    const std::size_t n = amp.coordinates.size();
    using Vec = std::vector<Rational>;
    auto unit = [&](std::size_t i) {
        Vec v(n, Rational(0));
        v[i] = 1;
        return v;
    };

    // Incoming momentum at each external half-edge; the last leg of a component balances the rest.
    std::vector<Vec> leg_momentum(g.halfedges().size());
    for (auto& legs : legs_of) {
        Vec last(n, Rational(0));
        for (std::size_t i = 0; i + 1 < legs.size(); ++i) {
            leg_momentum[legs[i]] = unit(leg_coord[legs[i]]);
            for (std::size_t k = 0; k < n; ++k) last[k] -= leg_momentum[legs[i]][k];
        }
        if (!legs.empty()) leg_momentum[legs.back()] = last;
    }

    // Edge momentum flows from the vertex of pair.first to the vertex of pair.second.
    std::vector<Vec> edge_momentum(pairs.size());
    std::vector<bool> known(pairs.size(), false);
    std::vector<Vec> inflow(nv, Vec(n, Rational(0)));
    auto add_flow = [&](std::size_t e) {
        std::size_t a = g.halfedges()[pairs[e].first].vertex, b = g.halfedges()[pairs[e].second].vertex;
        for (std::size_t k = 0; k < n; ++k) {
            inflow[a][k] -= edge_momentum[e][k];
            inflow[b][k] += edge_momentum[e][k];
        }
    };
    for (std::size_t h = 0; h < g.halfedges().size(); ++h)
        if (g.is_external(h))
            for (std::size_t k = 0; k < n; ++k) inflow[g.halfedges()[h].vertex][k] += leg_momentum[h][k];
    for (std::size_t e = 0; e < pairs.size(); ++e)
        if (!tree[e]) {
            edge_momentum[e] = unit(chord_coord[e]);
            known[e] = true;
            add_flow(e);
        }
    // Peel tree leaves: a vertex with one unknown tree edge must send its net inflow along it.
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t v = 0; v < nv; ++v) {
            std::size_t unknown = SIZE_MAX, count = 0;
            for (std::size_t e = 0; e < pairs.size(); ++e) {
                if (known[e]) continue;
                std::size_t a = g.halfedges()[pairs[e].first].vertex, b = g.halfedges()[pairs[e].second].vertex;
                if (a == v || b == v) {
                    unknown = e;
                    ++count;
                }
            }
            if (count != 1) continue;
            std::size_t a = g.halfedges()[pairs[unknown].first].vertex;
            edge_momentum[unknown] = inflow[v];
            if (a != v)
                for (auto& x : edge_momentum[unknown]) x = -x;
            known[unknown] = true;
            add_flow(unknown);
            progress = true;
        }
    }

    auto factor = [&](const Vec& c, const std::string& type) {
        const EdgeType& et = t.edge(type);
        if (et.weight != 2 && !et.scalarized)
            fail(errc::unsupported_propagator, "edge type '" + type + "' has no scalar 1/(p^2+m^2) propagator");
        RMatrix b = zeros(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b[i][j] = c[i] * c[j];
        amp.integrand.forms.push_back(b);
        amp.integrand.masses2.push_back(et.mass2);
    };
    for (std::size_t h = 0; h < g.halfedges().size(); ++h)
        if (g.is_external(h)) {
            factor(leg_momentum[h], g.halfedges()[h].type);
            amp.external_factor.push_back(true);
        }
    for (std::size_t e = 0; e < pairs.size(); ++e) {
        factor(edge_momentum[e], g.halfedges()[pairs[e].first].type);
        amp.external_factor.push_back(false);
    }
    amp.integrand.dim = n;
    for (std::size_t i = 0; i < m; ++i) amp.integrand.subspace.push_back(i);
    return amp;
}

namespace detail {

/// Monomials of total degree <= order in `vars` variables and their product table.
struct JetShape {
    std::vector<std::vector<unsigned>> exponents;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> products;  // per index: (i, j) with e_i + e_j = e

    static const JetShape& get(std::size_t vars, unsigned order) {
        static std::mutex lock;
        static std::map<std::pair<std::size_t, unsigned>, std::unique_ptr<JetShape>> cache;
        std::lock_guard guard(lock);
        auto& slot = cache[{vars, order}];
        if (!slot) slot = std::make_unique<JetShape>(vars, order);
        return *slot;
    }

    JetShape(std::size_t vars, unsigned order) {
        std::vector<unsigned> e(vars, 0);
        std::function<void(std::size_t, unsigned)> rec = [&](std::size_t v, unsigned left) {
            if (v == vars) {
                exponents.push_back(e);
                return;
            }
            for (unsigned k = 0; k <= left; ++k) {
                e[v] = k;
                rec(v + 1, left - k);
            }
            e[v] = 0;
        };
        rec(0, order);
        std::sort(exponents.begin(), exponents.end(), [](const auto& x, const auto& y) {
            unsigned dx = 0, dy = 0;
            for (auto k : x) dx += k;
            for (auto k : y) dy += k;
            return dx != dy ? dx < dy : x < y;
        });
        std::map<std::vector<unsigned>, std::size_t> index;
        for (std::size_t i = 0; i < exponents.size(); ++i) index[exponents[i]] = i;
        products.resize(exponents.size());
        for (std::size_t i = 0; i < exponents.size(); ++i)
            for (std::size_t j = 0; j < exponents.size(); ++j) {
                std::vector<unsigned> sum(vars);
                for (std::size_t v = 0; v < vars; ++v) sum[v] = exponents[i][v] + exponents[j][v];
                auto it = index.find(sum);
                if (it != index.end()) products[it->second].emplace_back(i, j);
            }
    }

    std::size_t find(const std::vector<unsigned>& e) const {
        for (std::size_t i = 0; i < exponents.size(); ++i)
            if (exponents[i] == e) return i;
        return exponents.size();
    }
};

/// Truncated power series in a few variables with complex coefficients; index 0 is the constant term.
class Jet {
public:
    using Exponent = std::vector<unsigned>;

    Jet() = default;
    Jet(std::size_t vars, unsigned order, std::complex<double> c = 0)
        : shape_(&JetShape::get(vars, order)), c_(shape_->exponents.size(), 0.0) {
        c_[0] = c;
    }
    static Jet variable(std::size_t vars, unsigned order, std::size_t k) {
        Jet j(vars, order);
        if (order > 0) {
            Exponent e(vars, 0);
            e[k] = 1;
            j.c_[j.shape_->find(e)] = 1;
        }
        return j;
    }

    std::complex<double> constant() const { return c_[0]; }
    std::complex<double> coefficient(const Exponent& e) const {
        std::size_t i = shape_->find(e);
        return i < c_.size() ? c_[i] : 0.0;
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet out = a;
        for (std::size_t k = 0; k < a.c_.size(); ++k) {
            std::complex<double> s = 0;
            for (auto [i, j] : a.shape_->products[k]) s += a.c_[i] * b.c_[j];
            out.c_[k] = s;
        }
        return out;
    }
    friend Jet operator*(std::complex<double> s, Jet a) {
        for (auto& v : a.c_) v *= s;
        return a;
    }
    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }

    /// Applies a function through its Taylor coefficients f^(k)(c0)/k! at the constant term.
    Jet compose(const std::vector<std::complex<double>>& taylor) const {
        Jet nil = *this;
        nil.c_[0] = 0;
        Jet out = taylor.back() * unit();
        for (std::size_t k = taylor.size() - 1; k-- > 0;) out = nil * out + taylor[k] * unit();
        return out;
    }
    Jet reciprocal() const {
        std::complex<double> c0 = constant();
        std::vector<std::complex<double>> t(order() + 1);
        for (unsigned k = 0; k <= order(); ++k) t[k] = std::pow(-1.0 / c0, double(k)) / c0;
        return compose(t);
    }
    Jet exp() const {
        std::complex<double> e0 = std::exp(constant());
        std::vector<std::complex<double>> t(order() + 1);
        double fact = 1;
        for (unsigned k = 0; k <= order(); ++k) {
            if (k > 0) fact *= k;
            t[k] = e0 / fact;
        }
        return compose(t);
    }
    Jet log() const {
        std::complex<double> c0 = constant();
        std::vector<std::complex<double>> t(order() + 1);
        t[0] = std::log(c0);
        for (unsigned k = 1; k <= order(); ++k) t[k] = (k % 2 ? 1.0 : -1.0) / (double(k) * std::pow(c0, double(k)));
        return compose(t);
    }

private:
    unsigned order() const {
        unsigned d = 0;
        for (auto k : shape_->exponents.back()) d += k;
        return d;
    }
    Jet unit() const {
        Jet u = *this;
        std::fill(u.c_.begin(), u.c_.end(), 0.0);
        u.c_[0] = 1;
        return u;
    }

    const JetShape* shape_ = nullptr;
    std::vector<std::complex<double>> c_;
};

template <class T>
struct SchurValue {
    T det;
    std::vector<std::vector<T>> f_star;
};

/// Gaussian elimination of the complement block; B_{F-perp} must be positive definite.
template <class T>
SchurValue<T> schur_numeric(const std::vector<std::vector<T>>& b, const std::vector<std::size_t>& f,
                            const std::vector<std::size_t>& g, const T& one) {
    std::vector<std::size_t> order = g;
    order.insert(order.end(), f.begin(), f.end());
    const std::size_t n = order.size();
    std::vector<std::vector<T>> a(n, std::vector<T>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = b[order[i]][order[j]];
    T det = one;
    for (std::size_t k = 0; k < g.size(); ++k) {
        det = det * a[k][k];
        T inv = one / a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            T factor = a[i][k] * inv;
            for (std::size_t j = k; j < n; ++j) a[i][j] = a[i][j] - factor * a[k][j];
        }
    }
    SchurValue<T> out{det, std::vector<std::vector<T>>(f.size(), std::vector<T>(f.size()))};
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < f.size(); ++j) out.f_star[i][j] = a[g.size() + i][g.size() + j];
    return out;
}

inline std::vector<std::vector<double>> to_double(const RMatrix& m) {
    std::vector<std::vector<double>> out(m.size(), std::vector<double>(cols(m)));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols(m); ++j) out[i][j] = m[i][j].get_d();
    return out;
}

/// An integrand split into F-supported factors, which integrate trivially, and the rest.
struct Prepared {
    std::size_t n = 0;
    std::vector<std::size_t> f, g;
    std::vector<std::vector<std::vector<double>>> forms;  // remaining factors
    std::vector<RMatrix> exact_forms;
    std::vector<double> masses2;
    std::vector<std::vector<double>> c;  // external form on F
    std::complex<double> outside = 1;    // product over F-supported factors at C
    MultiPolynomial numerator;
};

inline bool supported_on(const RMatrix& b, const std::vector<std::size_t>& f) {
    std::vector<bool> in(b.size(), false);
    for (auto i : f) in[i] = true;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if ((!in[i] || !in[j]) && !is_zero(b[i][j])) return false;
    return true;
}

inline Prepared prepare(const SchwingerIntegrand& s, const RMatrix& c) {
    validate(s);
    if (c.size() != s.subspace.size() || !is_symmetric(c))
        fail(errc::invalid_argument, "external form must be symmetric of the subspace dimension");
    if (!is_positive_semidefinite(c)) fail(errc::not_positive_definite, "external form must be positive semidefinite");
    Prepared p;
    p.n = s.dim;
    p.f = s.subspace;
    p.g = complement(s.dim, s.subspace);
    p.c = to_double(c);
    p.numerator = s.numerator;
    const bool constant_numerator = s.numerator.degree() <= 0;
    for (std::size_t j = 0; j < s.forms.size(); ++j) {
        if (constant_numerator && supported_on(s.forms[j], p.f)) {
            RMatrix bf = submatrix(s.forms[j], p.f, p.f);
            p.outside /= Rational(trace(c * bf) + s.masses2[j]).get_d();
            continue;
        }
        p.forms.push_back(to_double(s.forms[j]));
        p.exact_forms.push_back(s.forms[j]);
        p.masses2.push_back(s.masses2[j].get_d());
    }
    if (constant_numerator) {
        auto it = s.numerator.terms().find({});
        p.outside *= it == s.numerator.terms().end() ? 0.0 : it->second.get_d();
    }
    return p;
}

/// Largest real D below which every set S of Schwinger parameters tending to zero stays integrable:
/// |S| - growth_S(P) > deficit_S * D / 2. `proper` leaves out the set of all parameters.
inline double convergence_bound(const Prepared& p, bool proper) {
    const std::size_t l = p.forms.size();
    double bound = INFINITY;
    for (std::uint64_t s = 1; s < (std::uint64_t(1) << l); ++s) {
        if (proper && s == (std::uint64_t(1) << l) - 1) continue;
        RMatrix rest = zeros(p.g.size(), p.g.size());
        unsigned size = 0;
        for (std::size_t j = 0; j < l; ++j) {
            if (s >> j & 1) {
                ++size;
                continue;
            }
            rest = rest + submatrix(p.exact_forms[j], p.g, p.g);
        }
        auto kernel = nullspace(rest);
        if (kernel.empty()) continue;
        std::vector<bool> grows(p.n, false);
        for (auto& v : kernel)
            for (std::size_t i = 0; i < p.g.size(); ++i)
                if (!is_zero(v[i])) grows[p.g[i]] = true;
        double growth = 0;
        for (auto& [e, c] : p.numerator.terms()) {
            double mono = 0;
            for (std::size_t k = 0; k < e.size(); ++k) {
                auto [i, j] = entry_of_variable(p.n, k);
                mono += e[k] * 0.5 * (double(grows[i]) + double(grows[j]));
            }
            growth = std::max(growth, mono);
        }
        bound = std::min(bound, 2.0 * (double(size) - growth) / double(kernel.size()));
    }
    return bound;
}

inline std::vector<std::vector<double>> combine(const Prepared& p, const double* t) {
    std::vector<std::vector<double>> b(p.n, std::vector<double>(p.n, 0.0));
    for (std::size_t j = 0; j < p.forms.size(); ++j)
        for (std::size_t r = 0; r < p.n; ++r)
            for (std::size_t q = 0; q < p.n; ++q) b[r][q] += t[j] * p.forms[j][r][q];
    return b;
}

inline double trace_product(const std::vector<std::vector<double>>& c, const std::vector<std::vector<double>>& s) {
    double tr = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) tr += c[i][j] * s[j][i];
    return tr;
}

/// The integrand at a point x of the simplex sum x_j = 1 after t = lambda x and the lambda integral:
/// with B = B(x), a = sum x_j m_j^2 + tr(C B^{F*}) and r = dim F-perp, the P = 1 term is
/// Gamma(l - rD/2) a^{-(l - rD/2)} det(B_{F-perp})^{-D/2}. A numerator monomial of degree |beta| contributes
/// one such term per power k of the non-constant part of tr(C B^{F*}), with l shifted to l + k - |beta|.
inline std::complex<double> simplex_value(const Prepared& p, const double* x, std::complex<double> d) {
    auto b = combine(p, x);
    const double l = double(p.forms.size()), r = double(p.g.size());
    double mass = 0;
    for (std::size_t j = 0; j < p.forms.size(); ++j) mass += x[j] * p.masses2[j];
    if (p.numerator.degree() <= 0) {
        auto sv = schur_numeric(b, p.f, p.g, 1.0);
        if (!(sv.det > 0)) return 0.0;
        std::complex<double> nu = l - 0.5 * r * d;
        double a = mass + trace_product(p.c, sv.f_star);
        return complex_gamma(nu) * std::exp(-nu * std::log(a) - 0.5 * d * std::log(sv.det));
    }
    // Jet variables: the entries a_pq that occur in P.
    std::vector<std::size_t> used;
    for (auto& [e, c] : p.numerator.terms())
        for (std::size_t k = 0; k < e.size(); ++k)
            if (e[k] && std::find(used.begin(), used.end(), k) == used.end()) used.push_back(k);
    std::sort(used.begin(), used.end());
    const unsigned order = static_cast<unsigned>(p.numerator.degree());
    const std::size_t nvar = used.size();
    std::vector<std::vector<Jet>> bj(p.n, std::vector<Jet>(p.n));
    for (std::size_t i = 0; i < p.n; ++i)
        for (std::size_t j = 0; j < p.n; ++j) bj[i][j] = Jet(nvar, order, b[i][j]);
    std::vector<double> scale(nvar);
    for (std::size_t v = 0; v < nvar; ++v) {
        auto [i, j] = entry_of_variable(p.n, used[v]);
        Jet eps = Jet::variable(nvar, order, v);
        bj[i][j] += eps;
        if (i != j) bj[j][i] += eps;
        scale[v] = i == j ? -1.0 : -0.5;
    }
    auto sv = schur_numeric(bj, p.f, p.g, Jet(nvar, order, 1.0));
    if (!(sv.det.constant().real() > 0)) return 0.0;
    Jet s(nvar, order);
    for (std::size_t i = 0; i < p.f.size(); ++i)
        for (std::size_t j = 0; j < p.f.size(); ++j) s += p.c[i][j] * sv.f_star[j][i];
    const double s0 = s.constant().real(), a = mass + s0;
    Jet shat = s - Jet(nvar, order, s0);
    Jet ldet = (-0.5 * d * sv.det.log()).exp();
    // q[k] = (-shat)^k / k! * det^{-D/2}
    std::vector<Jet> q{ldet};
    for (unsigned k = 1; k <= order; ++k) q.push_back((-1.0 / double(k)) * (shat * q.back()));
    std::complex<double> total = 0;
    for (auto& [e, c] : p.numerator.terms()) {
        Jet::Exponent local(nvar, 0);
        double factor = c.get_d();
        unsigned degree = 0;
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (!e[k]) continue;
            std::size_t v = std::find(used.begin(), used.end(), k) - used.begin();
            local[v] = e[k];
            degree += e[k];
            for (unsigned i = 1; i <= e[k]; ++i) factor *= scale[v] * double(i);
        }
        for (unsigned k = 0; k <= degree; ++k) {
            std::complex<double> coeff = q[k].coefficient(local);
            if (coeff == 0.0) continue;
            std::complex<double> nu = l + double(k) - double(degree) - 0.5 * r * d;
            total += factor * coeff * complex_gamma(nu) * std::exp(-nu * std::log(a));
        }
    }
    return total;
}

/// pi^{rD/2} (times (2 pi)^{-rD} for the normalized measure) times the F-supported factors times the
/// simplex integral of simplex_value.
inline std::complex<double> radial_value(const Prepared& p, std::complex<double> d, const QuadratureOptions& opt,
                                         Measure measure) {
    const double r = double(p.g.size());
    std::complex<double> pre = std::exp(0.5 * r * d * std::log(std::numbers::pi));
    if (measure == Measure::normalized) pre *= std::exp(-r * d * std::log(2 * std::numbers::pi));
    if (p.forms.empty()) return pre * p.outside;
    const std::size_t cube = p.forms.size() - 1;
    std::vector<double> x(p.forms.size());
    auto q = integrate_cube(
        cube,
        [&](const double* u, const double* uc) -> std::complex<double> {
            double rest = 1, jac = 1;
            for (std::size_t i = 0; i < cube; ++i) {
                x[i] = rest * u[i];
                jac *= rest;
                rest *= uc[i];
            }
            x[cube] = rest;
            return jac * simplex_value(p, x.data(), d);
        },
        opt);
    return pre * p.outside * q.value;
}

}  // namespace detail

/// I^D_{E,F}(f)(C) at complex D inside the convergence region of the Schwinger-parametric integral.
inline std::complex<double> eval_parametric(const SchwingerIntegrand& s, const RMatrix& c, std::complex<double> d,
                                            const QuadratureOptions& opt = {}, Measure measure = Measure::lebesgue) {
    auto p = detail::prepare(s, c);
    if (!(d.real() < detail::convergence_bound(p, false)))
        fail(errc::not_convergent, "Schwinger integral diverges at Re D = " + std::to_string(d.real()));
    return detail::radial_value(p, d, opt, measure);
}

struct CauchyOptions {
    std::size_t samples = 64;
    double max_radius = 1.0;
    QuadratureOptions quadrature{1e-12, std::size_t(1) << 20, 4.5};
};

/// a_n = (1/2 pi i) oint F(D) (D - d)^{-n-1} dD on |D - d| = radius, trapezoid rule in the angle.
template <class F>
LaurentSeries<std::complex<double>> cauchy_coefficients(F&& value, double center, double radius, Window window,
                                                        std::size_t samples) {
    if (samples < 64) fail(errc::invalid_argument, "at least 64 circle samples are required");
    std::vector<std::complex<double>> vals(samples);
    const std::size_t workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < samples; i += workers)
                    vals[i] = value(center + std::polar(radius, 2 * std::numbers::pi * double(i) / double(samples)));
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<std::complex<double>> coeffs;
    std::vector<std::complex<double>> terms(samples);
    for (int n = window.min; n <= window.max; ++n) {
        for (std::size_t i = 0; i < samples; ++i)
            terms[i] = vals[i] * std::polar(std::pow(radius, -n), -n * 2 * std::numbers::pi * double(i) / double(samples));
        coeffs.push_back(pairwise_sum(terms.data(), samples) / double(samples));
    }
    return LaurentSeries<std::complex<double>>(window.min, std::move(coeffs), window.max);
}

namespace detail {
/// Real data and a real center give real coefficients.
inline LaurentSeries<std::complex<double>> real_part(const LaurentSeries<std::complex<double>>& s, Window w) {
    std::vector<std::complex<double>> re;
    for (int n = w.min; n <= w.max; ++n) re.push_back(s[n].real());
    return LaurentSeries<std::complex<double>>(w.min, std::move(re), w.max);
}
}  // namespace detail

/// Laurent coefficients of I^D(f)(C) in z = D - d. The overall poles are those of the Gamma factors of the
/// radial integral; the simplex integral must converge on the whole circle, otherwise the subdivergence
/// would need a further continuation step.
inline LaurentSeries<std::complex<double>> laurent_extract(const SchwingerIntegrand& s, const RMatrix& c, int center,
                                                           Window window = {}, const CauchyOptions& opt = {},
                                                           Measure measure = Measure::lebesgue) {
    auto p = detail::prepare(s, c);
    const double l = double(p.forms.size()), r = double(p.g.size()), d = center;
    const long degree = std::max<long>(0, s.numerator.degree());
    double radius = opt.max_radius;
    if (r > 0 && l > 0)
        for (long shift = -degree; shift <= 0; ++shift)
            for (int k = 0; k < 1000; ++k) {
                double pole = 2 * (l + double(shift) + k) / r;
                if (std::abs(pole - d) > 1e-12) radius = std::min(radius, 0.5 * std::abs(pole - d));
            }
    double sub = detail::convergence_bound(p, true);
    if (!(sub > d))
        fail(errc::continuation_not_implemented,
             "subdivergence at D = " + std::to_string(center) + " exceeds the supported continuation depth");
    if (std::isfinite(sub)) radius = std::min(radius, 0.5 * (sub - d));
    return detail::real_part(cauchy_coefficients(
        [&](std::complex<double> dd) { return detail::radial_value(p, dd, opt.quadrature, measure); }, d, radius, window,
        opt.samples), window);
}

/// Laurent coefficients of a Gaussian element at C; entire in D.
inline LaurentSeries<std::complex<double>> laurent_extract(const GaussianElement& g, const RMatrix& c, int center,
                                                           Window window = {}, std::size_t samples = 64) {
    return detail::real_part(cauchy_coefficients([&](std::complex<double> d) { return g(c, d); }, center, 1.0, window, samples),
                             window);
}

}  // namespace feynhopf
