#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "feynhopf/error.hpp"

namespace feynhopf {

/// Exact rational scalar. GMP keeps every value in lowest terms.
using Rational = mpq_class;

/// Parses "p", "p/q" or a plain decimal such as "-1.25".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) fail(errc::parse, "empty rational literal");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        if (s.find('/') != std::string::npos) fail(errc::parse, "malformed rational '" + s + "'");
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::string denom = "1" + std::string(s.size() - dot - 1, '0');
        s = digits + "/" + denom;
    }
    Rational r;
    if (r.set_str(s, 10) != 0) fail(errc::parse, "malformed rational '" + std::string(text) + "'");
    if (r.get_den() == 0) fail(errc::parse, "zero denominator in '" + std::string(text) + "'");
    r.canonicalize();
    return r;
}

/// Renders as "p" or "p/q".
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational rational(std::int64_t num, std::int64_t den = 1) {
    Rational r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

}  // namespace feynhopf
