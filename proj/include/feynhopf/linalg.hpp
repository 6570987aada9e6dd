#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "feynhopf/rational.hpp"

namespace feynhopf {

/// Dense exact matrix, row-major.
using RMatrix = std::vector<std::vector<Rational>>;

inline RMatrix zeros(std::size_t r, std::size_t c) { return RMatrix(r, std::vector<Rational>(c, Rational(0))); }

inline RMatrix identity(std::size_t n) {
    RMatrix m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline std::size_t cols(const RMatrix& m) { return m.empty() ? 0 : m.front().size(); }

inline bool is_symmetric(const RMatrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != m.size()) return false;
        for (std::size_t j = 0; j < i; ++j)
            if (m[i][j] != m[j][i]) return false;
    }
    return true;
}

inline RMatrix operator+(RMatrix a, const RMatrix& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += b[i][j];
    return a;
}

inline RMatrix operator-(RMatrix a, const RMatrix& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= b[i][j];
    return a;
}

inline RMatrix operator*(const RMatrix& a, const RMatrix& b) {
    RMatrix out = zeros(a.size(), cols(b));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a[i].size(); ++k) {
            if (is_zero(a[i][k])) continue;
            for (std::size_t j = 0; j < cols(b); ++j) out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

inline RMatrix operator*(const Rational& s, RMatrix a) {
    for (auto& row : a)
        for (auto& x : row) x *= s;
    return a;
}

inline RMatrix transpose(const RMatrix& a) {
    RMatrix out = zeros(cols(a), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
    return out;
}

inline Rational trace(const RMatrix& a) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i][i];
    return s;
}

/// Rows and columns picked by index lists.
inline RMatrix submatrix(const RMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cs) {
    RMatrix out = zeros(rows.size(), cs.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cs.size(); ++j) out[i][j] = m.at(rows[i]).at(cs[j]);
    return out;
}

/// Exact LDL^T without pivoting; positive definite iff every pivot is positive.
inline bool is_positive_definite(const RMatrix& m) {
    if (!is_symmetric(m)) return false;
    RMatrix a = m;
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (sgn(a[k][k]) <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (is_zero(a[i][k])) continue;
            Rational f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return true;
}

/// Symmetric positive semidefinite test via principal minors of the pivoted elimination.
inline bool is_positive_semidefinite(const RMatrix& m) {
    if (!is_symmetric(m)) return false;
    RMatrix a = m;
    const std::size_t n = a.size();
    std::vector<bool> done(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t k = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!done[i] && sgn(a[i][i]) > 0) {
                k = i;
                break;
            }
        if (k == n) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && !is_zero(a[i][j])) return false;
            return true;
        }
        done[k] = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i] || is_zero(a[i][k])) continue;
            Rational f = a[i][k] / a[k][k];
            for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return true;
}

inline Rational determinant(RMatrix a) {
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && is_zero(a[p][k])) ++p;
        if (p == n) return 0;
        if (p != k) {
            std::swap(a[p], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (is_zero(a[i][k])) continue;
            Rational f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

inline std::size_t rank(RMatrix a) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols(a) && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && is_zero(a[p][c])) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < a.size(); ++i) {
            if (is_zero(a[i][c])) continue;
            Rational f = a[i][c] / a[r][c];
            for (std::size_t j = c; j < cols(a); ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

/// Basis of the kernel {x : A x = 0}, one vector per free column of the reduced row echelon form.
inline std::vector<std::vector<Rational>> nullspace(RMatrix a) {
    const std::size_t n = cols(a);
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && is_zero(a[p][c])) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        Rational piv = a[r][c];
        for (auto& x : a[r]) x /= piv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || is_zero(a[i][c])) continue;
            Rational f = a[i][c];
            for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[r][j];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
        std::vector<Rational> v(n, Rational(0));
        v[free] = 1;
        for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -a[i][free];
        basis.push_back(v);
    }
    return basis;
}

inline RMatrix inverse(const RMatrix& m) {
    const std::size_t n = m.size();
    RMatrix a = m, inv = identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && is_zero(a[p][k])) ++p;
        if (p == n) fail(errc::singular_block, "matrix block is singular");
        std::swap(a[p], a[k]);
        std::swap(inv[p], inv[k]);
        Rational piv = a[k][k];
        for (std::size_t j = 0; j < n; ++j) {
            a[k][j] /= piv;
            inv[k][j] /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || is_zero(a[i][k])) continue;
            Rational f = a[i][k];
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] -= f * a[k][j];
                inv[i][j] -= f * inv[k][j];
            }
        }
    }
    return inv;
}

/// Coordinate indices of 0..n-1 not in `f`, in increasing order.
inline std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& f) {
    std::vector<bool> in(n, false);
    for (auto i : f) {
        if (i >= n || in[i]) fail(errc::invalid_argument, "subspace indices must be distinct and inside the space");
        in[i] = true;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (!in[i]) out.push_back(i);
    return out;
}

/// B^{F*} = B11 - B12 B22^{-1} B21 and B_{F-perp} = B22 for the coordinate subspace F.
struct SchurSplit {
    RMatrix f_star;
    RMatrix f_perp;
};

inline SchurSplit schur_split(const RMatrix& b, const std::vector<std::size_t>& f) {
    auto g = complement(b.size(), f);
    RMatrix b11 = submatrix(b, f, f), b12 = submatrix(b, f, g), b21 = submatrix(b, g, f), b22 = submatrix(b, g, g);
    if (g.empty()) return {b11, {}};
    return {b11 - b12 * inverse(b22) * b21, b22};
}

}  // namespace feynhopf
