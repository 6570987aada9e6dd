#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "feynhopf/dimreg.hpp"
#include "feynhopf/hopf.hpp"

namespace feynhopf {

using Labels = std::vector<std::string>;

/// Sorted half-edge ids of g: the coordinates of the function space V_Gamma.
inline Labels labels(const Graph& g) {
    Labels out;
    for (const auto& h : g.halfedges()) out.push_back(h.id);
    std::sort(out.begin(), out.end());
    return out;
}

/// Half-edge ids of the pairs in `kept`.
inline Labels internal_labels(const Graph& g, EdgeMask kept) {
    Labels out;
    for (std::size_t p = 0; p < g.internal_pairs().size(); ++p)
        if (kept >> p & 1) {
            out.push_back(g.halfedges()[g.internal_pairs()[p].first].id);
            out.push_back(g.halfedges()[g.internal_pairs()[p].second].id);
        }
    std::sort(out.begin(), out.end());
    return out;
}

inline Labels set_minus(const Labels& a, const Labels& b) {
    Labels out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

/// Integrate out a set of coordinates, or multiply by exp(-lambda tr C) restricted to a set of coordinates.
struct Atom {
    enum class Kind { integrate, mult };
    Kind kind = Kind::integrate;
    Labels labels;
    Rational lambda = 0;
};

/// Atoms applied left to right. Atoms on disjoint coordinates commute.
struct Word {
    std::vector<Atom> atoms;

    std::string render() const {
        if (atoms.empty()) return "Id";
        std::string s;
        for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
            if (!s.empty()) s += " o ";
            s += it->kind == Atom::Kind::integrate ? "I[" : "M(" + to_string(it->lambda) + ")[";
            for (std::size_t i = 0; i < it->labels.size(); ++i) s += (i ? "," : "") + it->labels[i];
            s += "]";
        }
        return s;
    }
};

/// A block V_domain -> V_codomain of End B: a finite combination of words with coefficients in R.
template <class R>
class Operator {
public:
    Operator() = default;
    Operator(Labels domain, Labels codomain) : domain_(std::move(domain)), codomain_(std::move(codomain)) {}

    static Operator identity(const Labels& l) {
        Operator o(l, l);
        o.add(Word{}, R(Rational(1)));
        return o;
    }
    static Operator word(Labels domain, Labels codomain, Word w, R coeff) {
        Operator o(std::move(domain), std::move(codomain));
        o.add(std::move(w), std::move(coeff));
        return o;
    }

    const Labels& domain() const noexcept { return domain_; }
    const Labels& codomain() const noexcept { return codomain_; }
    const std::map<std::string, std::pair<Word, R>>& terms() const noexcept { return terms_; }
    bool zero() const noexcept { return terms_.empty(); }

    void add(Word w, const R& c) {
        if (is_zero(c)) return;
        std::string k = w.render();
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(std::move(k), std::pair<Word, R>{std::move(w), c});
            return;
        }
        it->second.second = it->second.second + c;
        if (is_zero(it->second.second)) terms_.erase(it);
    }

    friend Operator operator+(Operator a, const Operator& b) {
        a.check_block(b);
        for (const auto& [k, t] : b.terms_) a.add(t.first, t.second);
        return a;
    }
    friend Operator operator-(Operator a, const Operator& b) {
        a.check_block(b);
        for (const auto& [k, t] : b.terms_) a.add(t.first, R{} - t.second);
        return a;
    }
    Operator operator-() const { return Operator(domain_, codomain_) - *this; }

    /// Applies f to every coefficient.
    template <class F>
    Operator map_coefficients(F&& f) const {
        Operator out(domain_, codomain_);
        for (const auto& [k, t] : terms_) out.add(t.first, f(t.second));
        return out;
    }

    std::string render() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [k, t] : terms_) {
            if (!s.empty()) s += "\n";
            s += "(" + to_string_coefficient(t.second) + ") * " + k;
        }
        return s;
    }

private:
    static std::string to_string_coefficient(const R& c) {
        if constexpr (requires { c.render(); })
            return c.render();
        else
            return to_string(c);
    }
    void check_block(const Operator& o) const {
        if (domain_ != o.domain_ || codomain_ != o.codomain_)
            fail(errc::incompatible_blocks, "operators act between different blocks");
    }

    Labels domain_, codomain_;
    std::map<std::string, std::pair<Word, R>> terms_;
};

/// b o a.
template <class R>
Operator<R> compose(const Operator<R>& b, const Operator<R>& a) {
    if (a.codomain() != b.domain()) fail(errc::incompatible_blocks, "codomain and domain do not match in a composition");
    Operator<R> out(a.domain(), b.codomain());
    for (const auto& [ka, ta] : a.terms())
        for (const auto& [kb, tb] : b.terms()) {
            Word w = ta.first;
            w.atoms.insert(w.atoms.end(), tb.first.atoms.begin(), tb.first.atoms.end());
            out.add(std::move(w), ta.second * tb.second);
        }
    return out;
}

/// a . b on the juxtaposed block V_{domain(a) u domain(b)}.
template <class R>
Operator<R> bullet(const Operator<R>& a, const Operator<R>& b) {
    auto merge = [](const Labels& x, const Labels& y) {
        Labels out;
        std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
        if (out.size() != x.size() + y.size()) fail(errc::incompatible_blocks, "bullet factors share coordinates");
        return out;
    };
    Operator<R> out(merge(a.domain(), b.domain()), merge(a.codomain(), b.codomain()));
    for (const auto& [ka, ta] : a.terms())
        for (const auto& [kb, tb] : b.terms()) {
            Word w = ta.first;
            w.atoms.insert(w.atoms.end(), tb.first.atoms.begin(), tb.first.atoms.end());
            out.add(std::move(w), ta.second * tb.second);
        }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Probes

/// Labels sorted, form permuted along.
inline GaussianElement canonical(const GaussianElement& g) {
    std::vector<std::size_t> order(g.space.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return g.space[x] < g.space[y]; });
    GaussianElement out;
    out.prefactor = g.prefactor;
    for (auto i : order) out.space.push_back(g.space[i]);
    out.form = submatrix(g.form, order, order);
    return out;
}

inline GaussianElement apply(const Word& w, GaussianElement g) {
    for (const auto& a : w.atoms) {
        std::vector<std::size_t> keep, hit;
        for (std::size_t i = 0; i < g.space.size(); ++i)
            (std::binary_search(a.labels.begin(), a.labels.end(), g.space[i]) ? hit : keep).push_back(i);
        if (hit.size() != a.labels.size()) fail(errc::incompatible_blocks, "atom acts on coordinates outside its block");
        if (a.kind == Atom::Kind::integrate) {
            g = integrate_gaussian(g, keep);
        } else {
            for (auto i : hit) g.form[i][i] += a.lambda;
        }
    }
    return canonical(g);
}

/// An operator applied to a Gaussian: a combination of Gaussians, equal ones merged.
template <class R>
struct ProbeValue {
    std::vector<std::pair<GaussianElement, R>> terms;

    void add(const GaussianElement& g, const R& c) {
        for (auto it = terms.begin(); it != terms.end(); ++it)
            if (it->first == g) {
                it->second = it->second + c;
                if (is_zero(it->second)) terms.erase(it);
                return;
            }
        if (!is_zero(c)) terms.emplace_back(g, c);
    }

    friend bool operator==(const ProbeValue& a, const ProbeValue& b) {
        ProbeValue diff = a;
        for (const auto& [g, c] : b.terms) diff.add(g, R{} - c);
        return diff.terms.empty();
    }
};

template <class R>
ProbeValue<R> apply(const Operator<R>& op, const GaussianElement& probe) {
    if (canonical(probe).space != op.domain()) fail(errc::incompatible_blocks, "probe does not live on the operator's domain");
    ProbeValue<R> out;
    for (const auto& [k, t] : op.terms()) out.add(apply(t.first, probe), t.second);
    return out;
}

/// Random positive definite Gaussians on the given coordinates: M^T M + I with small rational entries.
inline std::vector<GaussianElement> random_probes(const Labels& l, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<GaussianElement> out;
    const std::size_t n = l.size();
    for (std::size_t k = 0; k < count; ++k) {
        RMatrix m = zeros(n, n), b = zeros(n, n);
        for (auto& row : m)
            for (auto& x : row) x = rng() % 3 == 0 ? rational(long(rng() % 5) - 2, long(rng() % 2) + 1) : Rational(0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t q = 0; q < n; ++q) b[i][j] += m[q][i] * m[q][j];
                if (i == j) b[i][j] += 1;
            }
        out.push_back(gaussian(b, l));
    }
    return out;
}

/// Equality on every probe, coefficient by coefficient.
template <class R>
bool operators_equal(const Operator<R>& a, const Operator<R>& b, const std::vector<GaussianElement>& probes) {
    if (a.domain() != b.domain() || a.codomain() != b.codomain())
        fail(errc::incompatible_blocks, "operators act between different blocks");
    for (const auto& p : probes)
        if (!(apply(a, p) == apply(b, p))) return false;
    return true;
}

// ---------------------------------------------------------------------------------------------
// Characters

/// Identifies a concrete pair by its ids, so that memoized values keep their coordinate labels.
inline std::string concrete_key(const SpecifiedGraph& outer, const SpecifiedSubgraph& inner) {
    std::string s;
    for (const auto& v : outer.graph.vertices()) s += v.id + ":" + v.type + ";";
    s += "|";
    for (std::size_t h = 0; h < outer.graph.halfedges().size(); ++h)
        s += outer.graph.halfedges()[h].id + ">" + outer.graph.halfedges()[outer.graph.sigma(h)].id + ";";
    s += "|";
    for (auto x : outer.spec) s += std::to_string(x) + ",";
    s += "|" + std::to_string(inner.kept) + "|";
    for (auto x : inner.spec) s += std::to_string(x) + ",";
    return s;
}

/// A unital character of D_T with values in End B: a rule on pairs with connected outer graph,
/// the identity on degree zero, and the bullet product over components.
template <class R>
class Character {
public:
    /// The rule sees the character itself, for recursive definitions.
    using Rule = std::function<Operator<R>(const Character&, const SpecifiedGraph&, const SpecifiedSubgraph&)>;

    Character(Theory t, Rule rule) : impl_(std::make_shared<Impl>(std::move(t), std::move(rule))) {}

    const Theory& theory() const { return impl_->theory; }

    Operator<R> operator()(const SpecifiedGraph& outer, const SpecifiedSubgraph& inner) const {
        auto comps = components(outer.graph);
        if (comps.count <= 1) return connected(outer, inner);
        Operator<R> out = Operator<R>::identity({});
        for (const auto& p : split(outer, inner)) out = bullet(out, connected(SpecifiedGraph{p.outer, {p.spec}}, p.inner));
        return out;
    }

    /// The rule applied to the whole pair, without splitting into components.
    Operator<R> direct(const SpecifiedGraph& outer, const SpecifiedSubgraph& inner) const {
        if (inner.kept == 0) return Operator<R>::identity(labels(outer.graph));
        return impl_->rule(*this, outer, inner);
    }

    Operator<R> connected(const SpecifiedGraph& outer, const SpecifiedSubgraph& inner) const {
        if (inner.kept == 0) return Operator<R>::identity(labels(outer.graph));
        std::string k = concrete_key(outer, inner);
        {
            std::lock_guard guard(impl_->lock);
            auto it = impl_->memo.find(k);
            if (it != impl_->memo.end()) return it->second;
        }
        Operator<R> v = impl_->rule(*this, outer, inner);
        std::lock_guard guard(impl_->lock);
        return impl_->memo.emplace(k, std::move(v)).first->second;
    }

private:
    struct Impl {
        Impl(Theory t, Rule r) : theory(std::move(t)), rule(std::move(r)) {}
        Theory theory;
        Rule rule;
        std::mutex lock;
        std::map<std::string, Operator<R>> memo;
    };
    std::shared_ptr<Impl> impl_;
};

/// One term of the pair coproduct: (Gamma, delta) on the left, (Gamma/delta, gamma/delta) on the right.
struct CoproductTerm {
    SpecifiedSubgraph delta;
    SpecifiedGraph quotient_outer;
    SpecifiedSubgraph quotient_inner;
    long delta_grade;
};

inline std::vector<CoproductTerm> coproduct_terms(const Theory& t, const SpecifiedGraph& outer, const SpecifiedSubgraph& inner) {
    PairHopf h(t);
    std::vector<CoproductTerm> out;
    for (auto& delta : specified_subgraphs(t, outer.graph, inner.kept, inner.spec)) {
        auto [qo, qi] = h.quotient_pair(outer, inner, delta);
        long g = loop_number(outer.graph, delta.kept);
        out.push_back({std::move(delta), std::move(qo), std::move(qi), g});
    }
    return out;
}

/// V_Gamma -> V_{Gamma/gamma}: the domain and codomain of every character value on (Gamma, gamma).
inline std::pair<Labels, Labels> block(const Graph& g, EdgeMask inner) {
    Labels d = labels(g);
    return {d, set_minus(d, internal_labels(g, inner))};
}

/// The counit E: identity on degree zero, zero elsewhere.
template <class R>
Character<R> counit_character(const Theory& t) {
    return Character<R>(t, [](const Character<R>&, const SpecifiedGraph& o, const SpecifiedSubgraph& i) {
        auto [d, c] = block(o.graph, i.kept);
        return Operator<R>(d, c);
    });
}

/// Integrating out the coordinates of gamma's internal half-edges.
inline Word feynman_word(const Graph& g, EdgeMask inner) {
    Word w;
    auto l = internal_labels(g, inner);
    if (!l.empty()) w.atoms.push_back({Atom::Kind::integrate, l, 0});
    return w;
}

/// The Feynman rules I~(Gamma, gamma) = I^D_{Gamma, gamma}, D left formal.
template <class R>
Character<R> feynman_character(const Theory& t) {
    for (const auto& e : t.edge_types())
        if (e.weight != 2 && !e.scalarized)
            fail(errc::unsupported_propagator, "edge type '" + e.label + "' has no scalar 1/(p^2+m^2) propagator");
    return Character<R>(t, [](const Character<R>&, const SpecifiedGraph& o, const SpecifiedSubgraph& i) {
        auto [d, c] = block(o.graph, i.kept);
        return Operator<R>::word(d, c, feynman_word(o.graph, i.kept), R(Rational(1)));
    });
}

namespace detail {

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t seed) {
    std::uint64_t h = 1469598103934665603ull ^ seed;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

inline Rational small_rational(std::mt19937_64& rng) {
    long n = long(rng() % 9) - 4;
    return rational(n == 0 ? 1 : n, long(rng() % 3) + 1);
}

}  // namespace detail

/// Deterministic pseudo-random coefficients for synthetic characters.
template <class R>
R synthetic_coefficient(std::mt19937_64& rng);

template <>
inline LaurentSeries<Rational> synthetic_coefficient(std::mt19937_64& rng) {
    int lo = -int(rng() % 3);
    std::vector<Rational> c;
    for (int k = lo; k <= 1; ++k) c.push_back(detail::small_rational(rng));
    return LaurentSeries<Rational>(lo, c);
}

template <>
inline MultiPolynomial synthetic_coefficient(std::mt19937_64& rng) {
    MultiPolynomial p;
    for (int k = 0, n = 2 + int(rng() % 4); k < n; ++k) {
        MultiPolynomial::Exponent e{unsigned(rng() % 3), unsigned(rng() % 3)};
        p.add(e, detail::small_rational(rng));
    }
    return p;
}

/// A character whose value on each isomorphism class of pairs is c1 I + c2 M(lambda) o I,
/// with coefficients and lambda drawn from a hash of the pair's canonical key.
template <class R>
Character<R> synthetic_character(const Theory& t, std::uint64_t seed) {
    return Character<R>(t, [seed](const Character<R>&, const SpecifiedGraph& o, const SpecifiedSubgraph& i) {
        std::mt19937_64 rng(detail::fnv1a(key(PairGenerator{o.graph, o.spec.at(0), i}), seed));
        auto [d, c] = block(o.graph, i.kept);
        Word integrate = feynman_word(o.graph, i.kept), shifted = integrate;
        Rational lambda = rational(long(rng() % 4) + 1, long(rng() % 3) + 1);
        if (!c.empty()) shifted.atoms.push_back({Atom::Kind::mult, c, lambda});
        Operator<R> out(d, c);
        R c1 = synthetic_coefficient<R>(rng), c2 = synthetic_coefficient<R>(rng);
        out.add(integrate, c1);
        out.add(shifted, c2);
        return out;
    });
}

/// (phi / psi)(x) = sum over delta of psi(Gamma/delta, gamma/delta) o phi(Gamma, delta).
template <class R>
Character<R> convolve(const Character<R>& phi, const Character<R>& psi) {
    return Character<R>(phi.theory(), [phi, psi](const Character<R>& self, const SpecifiedGraph& o, const SpecifiedSubgraph& i) {
        auto [d, c] = block(o.graph, i.kept);
        Operator<R> out(d, c);
        for (const auto& term : coproduct_terms(self.theory(), o, i))
            out = out + compose(psi(term.quotient_outer, term.quotient_inner), phi(o, term.delta));
        return out;
    });
}

/// The convolution inverse from E(x) = sum_delta psi(x/delta) o phi(Gamma, delta): the delta of degree zero
/// is the skeleton and gives psi(x) itself, so psi(x) = -sum_{|delta| >= 1} psi(x/delta) o phi(Gamma, delta).
template <class R>
Character<R> inverse(const Character<R>& phi) {
    return Character<R>(phi.theory(), [phi](const Character<R>& self, const SpecifiedGraph& o, const SpecifiedSubgraph& i) {
        auto [d, c] = block(o.graph, i.kept);
        Operator<R> out(d, c);
        for (const auto& term : coproduct_terms(self.theory(), o, i)) {
            if (term.delta_grade == 0) continue;
            out = out - compose(self(term.quotient_outer, term.quotient_inner), phi(o, term.delta));
        }
        return out;
    });
}

/// A projection onto the "minus" part of the coefficient ring, possibly depending on the grading.
template <class R>
struct Scheme {
    std::string name;
    std::function<R(const R&, long)> project;
};

inline Scheme<LaurentSeries<Rational>> minimal_scheme() {
    return {"minimal", [](const LaurentSeries<Rational>& c, long) { return c.negative_part(); }};
}

inline Scheme<MultiPolynomial> taylor_scheme() {
    return {"taylor", [](const MultiPolynomial& c, long grade) { return taylor_pm(static_cast<unsigned>(grade), c); }};
}

template <class R>
Scheme<R> scheme(const std::string& name) {
    if constexpr (std::is_same_v<R, LaurentSeries<Rational>>) {
        if (name == "minimal") return minimal_scheme();
    } else if constexpr (std::is_same_v<R, MultiPolynomial>) {
        if (name == "taylor") return taylor_scheme();
    }
    fail(errc::scheme_unavailable, "scheme '" + name + "' is not available for this coefficient ring");
}

template <class R>
Operator<R> project(const Scheme<R>& s, const Operator<R>& op, long grade) {
    return op.map_coefficients([&](const R& c) { return s.project(c, grade); });
}

template <class R>
struct Birkhoff {
    Character<R> minus, plus;
};

/// Bog(x) = phi(x) + sum over delta with 1 <= |delta| < |gamma| of phi(x/delta) o phi_-(Gamma, delta);
/// phi_-(x) = -P(Bog(x)), phi_+(x) = (I - P)(Bog(x)), so that phi_+ = phi_- / phi.
template <class R>
Birkhoff<R> birkhoff(const Character<R>& phi, const Scheme<R>& s) {
    auto bog = [phi](const Character<R>& minus, const SpecifiedGraph& o, const SpecifiedSubgraph& i) {
        Operator<R> out = phi(o, i);
        for (const auto& term : coproduct_terms(minus.theory(), o, i)) {
            if (term.delta_grade == 0 || term.delta.kept == i.kept) continue;
            out = out + compose(phi(term.quotient_outer, term.quotient_inner), minus(o, term.delta));
        }
        return out;
    };
    Character<R> minus(phi.theory(), [bog, s](const Character<R>& self, const SpecifiedGraph& o, const SpecifiedSubgraph& i) {
        return -project(s, bog(self, o, i), loop_number(o.graph, i.kept));
    });
    Character<R> plus(phi.theory(), [bog, s, minus](const Character<R>&, const SpecifiedGraph& o, const SpecifiedSubgraph& i) {
        Operator<R> b = bog(minus, o, i);
        return b - project(s, b, loop_number(o.graph, i.kept));
    });
    return {minus, plus};
}

/// Every coefficient fixed by P (A_-) or killed by P (A_+).
template <class R>
bool in_minus(const Scheme<R>& s, const Operator<R>& op, long grade) {
    for (const auto& [k, t] : op.terms())
        if (!(s.project(t.second, grade) == t.second)) return false;
    return true;
}

template <class R>
bool in_plus(const Scheme<R>& s, const Operator<R>& op, long grade) {
    for (const auto& [k, t] : op.terms())
        if (!is_zero(s.project(t.second, grade))) return false;
    return true;
}

/// Minimal subtraction of a number-valued primitive: phi_- = -P(phi), phi_+ = (I - P)(phi).
struct Renormalized {
    LaurentSeries<std::complex<double>> minus, plus;
    std::complex<double> value;  // phi_+ at z = 0
};

inline Renormalized renormalize_primitive(const LaurentSeries<std::complex<double>>& bare) {
    Renormalized r;
    r.minus = -bare.negative_part();
    r.plus = bare.regular_part();
    r.value = r.plus[0];
    return r;
}

}  // namespace feynhopf
