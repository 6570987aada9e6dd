#pragma once

#include <complex>
#include <string>

#include "feynhopf/dimreg.hpp"
#include "feynhopf/io.hpp"

namespace feynhopf::io {

/// "p/q" strings or integers.
inline Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    fail(errc::parse, "rationals are integers or \"p/q\" strings, got " + j.dump());
}

inline json rational_to_json(const Rational& r) {
    if (r.get_den() == 1 && r.get_num().fits_slong_p()) return r.get_num().get_si();
    return r.get_str();
}

inline RMatrix matrix_from_json(const json& j) {
    if (!j.is_array()) fail(errc::parse, "matrices are arrays of rows");
    RMatrix m;
    for (const auto& row : j) {
        if (!row.is_array()) fail(errc::parse, "matrices are arrays of rows");
        m.emplace_back();
        for (const auto& x : row) m.back().push_back(rational_from_json(x));
        if (m.back().size() != m.front().size()) fail(errc::parse, "ragged matrix");
    }
    return m;
}

inline json matrix_to_json(const RMatrix& m) {
    json out = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& x : row) r.push_back(rational_to_json(x));
        out.push_back(r);
    }
    return out;
}

/// A Feynman-type integrand plus the external form C:
/// {"dim": n, "subspace": [..], "forms": [B_j], "masses2": [m_j^2],
///  "numerator": {"terms": [{"coeff": c, "a": [[p, q], ..]}]}, "external": C}.
/// "subspace", "numerator" and "external" are optional (empty, 1 and zero).
struct IntegrandFile {
    SchwingerIntegrand integrand;
    RMatrix external;
};

inline IntegrandFile integrand_from_json(const json& j) {
    using detail::field;
    IntegrandFile f;
    auto& s = f.integrand;
    try {
        s.dim = field(j, "dim").get<std::size_t>();
        if (j.contains("subspace")) s.subspace = j["subspace"].get<std::vector<std::size_t>>();
        for (const auto& b : field(j, "forms")) s.forms.push_back(matrix_from_json(b));
        for (const auto& m : field(j, "masses2")) s.masses2.push_back(rational_from_json(m));
        if (j.contains("numerator")) {
            MultiPolynomial p;
            for (const auto& t : field(j["numerator"], "terms")) {
                MultiPolynomial term = rational_from_json(field(t, "coeff"));
                for (const auto& pq : t.value("a", json::array())) {
                    auto [a, b] = pq.get<std::pair<std::size_t, std::size_t>>();
                    if (a >= s.dim || b >= s.dim) fail(errc::parse, "numerator entry outside the matrix");
                    term = term * MultiPolynomial::variable(entry_variable(s.dim, a, b));
                }
                p = p + term;
            }
            s.numerator = p;
        }
    } catch (const json::exception& e) {
        fail(errc::parse, e.what());
    }
    std::size_t m = s.subspace.size();
    f.external = j.contains("external") ? matrix_from_json(j["external"]) : zeros(m, m);
    validate(s);
    return f;
}

inline json integrand_to_json(const IntegrandFile& f) {
    const auto& s = f.integrand;
    json j;
    j["dim"] = s.dim;
    j["subspace"] = s.subspace;
    j["forms"] = json::array();
    for (const auto& b : s.forms) j["forms"].push_back(matrix_to_json(b));
    j["masses2"] = json::array();
    for (const auto& m : s.masses2) j["masses2"].push_back(rational_to_json(m));
    json terms = json::array();
    for (const auto& [e, c] : s.numerator.terms()) {
        json a = json::array();
        for (std::size_t k = 0; k < e.size(); ++k)
            for (unsigned r = 0; r < e[k]; ++r) {
                auto [p, q] = entry_of_variable(s.dim, k);
                a.push_back({p, q});
            }
        terms.push_back({{"coeff", rational_to_json(c)}, {"a", a}});
    }
    j["numerator"] = {{"terms", terms}};
    j["external"] = matrix_to_json(f.external);
    return j;
}

/// A number or {"re": x, "im": y}.
inline std::complex<double> complex_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
    fail(errc::parse, "complex numbers are numbers or {\"re\", \"im\"} objects");
}

inline json complex_to_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace feynhopf::io
