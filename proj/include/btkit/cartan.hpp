#pragma once

// Cartan decomposition of GL_n(K): every invertible g factors as
// k1^{-1} diag(p^{f_0}, ..., p^{f_{n-1}}) k2^{-1} with k1, k2 in GL_n(R) and
// f antitone, i.e. k1 * g * k2 = diag(p^f). The exponent tuple is unique and
// is independently computable from minor valuations (determinantal divisors).

#include "btkit/matrix.hpp"
#include "btkit/valued.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>
#include <vector>

namespace btkit {

struct CartanFactorisation {
    InvertibleMatrix k1;
    InvertibleMatrix k2;
    std::vector<long> f; ///< antitone exponents; k1 * g * k2 = diag(p^f)

    /// diag(p^{f_0}, ..., p^{f_{n-1}}).
    SquareMatrix diagonal(const PrimeConfig& cfg) const {
        std::vector<Rat> d;
        d.reserve(f.size());
        for (long e : f) d.push_back(cfg.uniformiser_pow(e));
        return SquareMatrix::diagonal(d);
    }
};

namespace detail {

/// Entry of minimal additive valuation in the leading m x m block,
/// lexicographically smallest (row, col) among ties. Throws if the block
/// is zero.
inline std::pair<int, int> min_valuation_position(const SquareMatrix& a, int m, const PrimeConfig& cfg) {
    Valuation best = Valuation::infinity();
    std::pair<int, int> pos{-1, -1};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Valuation v = valuation(a.at(i, j), cfg);
            if (v < best) {
                best = v;
                pos = {i, j};
            }
        }
    if (best.is_infinite()) throw std::domain_error("not invertible");
    return pos;
}

struct Reduction {
    SquareMatrix k1, k1_inv;
    SquareMatrix k2, k2_inv;
    SquareMatrix reduced; ///< k1 * g * k2
};

/// Gaussian-type reduction to a diagonal matrix with antitone valuations.
/// Normalises the entry of minimal valuation into the lower-right corner of
/// the active block, clears its row and column with R-integral eliminations,
/// then recurses on the leading block; a final swap pass sorts the diagonal.
inline Reduction reduce(const SquareMatrix& g, const PrimeConfig& cfg) {
    int n = g.dim();
    Reduction r{SquareMatrix::identity(n), SquareMatrix::identity(n),
                SquareMatrix::identity(n), SquareMatrix::identity(n), g};
    SquareMatrix& a = r.reduced;

    for (int m = n; m >= 2; --m) {
        auto [i, j] = min_valuation_position(a, m, cfg);
        if (i != m - 1) {
            a.swap_rows(i, m - 1);
            r.k1.swap_rows(i, m - 1);
            r.k1_inv.swap_cols(i, m - 1);
        }
        if (j != m - 1) {
            a.swap_cols(j, m - 1);
            r.k2.swap_cols(j, m - 1);
            r.k2_inv.swap_rows(j, m - 1);
        }
        const Rat pivot = a.at(m - 1, m - 1);
        // Clear the last column of the block; the coefficients lie in R
        // because the pivot valuation is minimal.
        for (int row = 0; row < m - 1; ++row) {
            if (a.at(row, m - 1) == 0) continue;
            Rat c(-a.at(row, m - 1) / pivot);
            a.row_axpy(row, m - 1, c);
            r.k1.row_axpy(row, m - 1, c);
            r.k1_inv.col_axpy(m - 1, row, Rat(-c));
        }
        // Clear the last row; the column m-1 above the pivot is already zero,
        // so these column operations leave the cleared column intact.
        for (int col = 0; col < m - 1; ++col) {
            if (a.at(m - 1, col) == 0) continue;
            Rat c(-a.at(m - 1, col) / pivot);
            a.col_axpy(col, m - 1, c);
            r.k2.col_axpy(col, m - 1, c);
            r.k2_inv.row_axpy(m - 1, col, Rat(-c));
        }
    }
    if (a.at(0, 0) == 0) throw std::domain_error("not invertible");

    // The pivots were chosen with non-decreasing valuation from the corner
    // inward, so the diagonal is already antitone; sorting keeps the
    // postcondition independent of that argument.
    for (int i = 0; i < n; ++i) {
        int best = i;
        for (int k = i + 1; k < n; ++k)
            if (valuation(a.at(k, k), cfg) > valuation(a.at(best, best), cfg)) best = k;
        if (best != i) {
            a.swap_rows(i, best);
            a.swap_cols(i, best);
            r.k1.swap_rows(i, best);
            r.k1_inv.swap_cols(i, best);
            r.k2.swap_cols(i, best);
            r.k2_inv.swap_rows(i, best);
        }
    }
    return r;
}

} // namespace detail

/// Permutation factors (k1, k2) in GL_n(R) moving an entry of minimal
/// additive valuation of g into the lower-right corner of k1 * g * k2.
inline std::pair<SquareMatrix, SquareMatrix> normalize_corner(const SquareMatrix& g, const PrimeConfig& cfg) {
    if (g.is_zero()) throw std::domain_error("zero matrix has no corner normalization");
    int n = g.dim();
    auto [i, j] = detail::min_valuation_position(g, n, cfg);
    SquareMatrix k1 = i == n - 1 ? SquareMatrix::identity(n) : SquareMatrix::swap(n, i, n - 1);
    SquareMatrix k2 = j == n - 1 ? SquareMatrix::identity(n) : SquareMatrix::swap(n, j, n - 1);
    return {k1, k2};
}

struct DiagonalReduction {
    InvertibleMatrix k1;
    InvertibleMatrix k2;
    SquareMatrix reduced; ///< k1 * g * k2, diagonal with antitone valuations
};

/// (k1, k2) in GL_n(R) with k1 * g * k2 a monotone diagonal matrix; the
/// minimal entry valuation of g is preserved. Works over any valuation ring:
/// p-powers are not used, only the valuation order on entries.
inline DiagonalReduction reduce_to_monotone_diag(const SquareMatrix& g, const PrimeConfig& cfg) {
    detail::Reduction r = detail::reduce(g, cfg);
    assert(is_monotone_diag(r.reduced, cfg));
    return {InvertibleMatrix::from_parts(std::move(r.k1), std::move(r.k1_inv)),
            InvertibleMatrix::from_parts(std::move(r.k2), std::move(r.k2_inv)),
            std::move(r.reduced)};
}

/// Full decomposition: diagonal entries u_i p^{f_i} are normalised to exact
/// uniformiser powers by absorbing diag(u_i^{-1}) into the left factor.
inline CartanFactorisation cartan_decompose(const SquareMatrix& g, const PrimeConfig& cfg) {
    detail::Reduction r = detail::reduce(g, cfg);
    int n = g.dim();
    std::vector<long> f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Rat& d = r.reduced.at(i, i);
        f[static_cast<std::size_t>(i)] = valuation(d, cfg).value();
        Rat u = unit_part(d, cfg);
        if (u != 1) {
            r.k1.scale_row(i, Rat(1 / u));
            r.k1_inv.scale_col(i, u);
            r.reduced.scale_row(i, Rat(1 / u));
        }
    }
    assert(std::is_sorted(f.rbegin(), f.rend()));
    return {InvertibleMatrix::from_parts(std::move(r.k1), std::move(r.k1_inv)),
            InvertibleMatrix::from_parts(std::move(r.k2), std::move(r.k2_inv)),
            std::move(f)};
}

namespace detail {

/// Cofactor-expansion determinant of the submatrix given by index lists.
/// Deliberately elimination-free so the exponent computation below shares no
/// code path with the reduction it cross-checks.
inline Rat minor_det(const SquareMatrix& g, const std::vector<int>& rows, const std::vector<int>& cols) {
    std::size_t k = rows.size();
    if (k == 1) return g.at(rows[0], cols[0]);
    Rat total(0);
    std::vector<int> sub(cols.begin() + 1, cols.end());
    std::vector<int> rest(rows.begin() + 1, rows.end());
    for (std::size_t j = 0; j < k; ++j) {
        if (j > 0) sub[j - 1] = cols[j - 1];
        const Rat& entry = g.at(rows[0], cols[j]);
        if (entry == 0) continue;
        Rat term(entry * minor_det(g, rest, sub));
        if (j % 2 == 0)
            total += term;
        else
            total -= term;
    }
    return total;
}

} // namespace detail

/// The antitone exponent tuple of g computed from determinantal divisors:
/// e_k = min valuation over all k x k minors, ascending exponents
/// a_k = e_k - e_{k-1}, reversed. Independent verification route for the
/// uniqueness of the Cartan exponents.
inline std::vector<long> invariant_exponents(const SquareMatrix& g, const PrimeConfig& cfg) {
    int n = g.dim();
    std::vector<long> ascending;
    long previous = 0;
    for (int k = 1; k <= n; ++k) {
        Valuation best = Valuation::infinity();
        std::vector<int> rows(static_cast<std::size_t>(k)), cols(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) rows[static_cast<std::size_t>(i)] = i;
        auto advance = [n, k](std::vector<int>& idx) {
            int i = k - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
            if (i < 0) return false;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        };
        do {
            for (int i = 0; i < k; ++i) cols[static_cast<std::size_t>(i)] = i;
            do {
                best = min(best, valuation(detail::minor_det(g, rows, cols), cfg));
            } while (advance(cols));
        } while (advance(rows));
        if (best.is_infinite()) throw std::domain_error("not invertible");
        ascending.push_back(best.value() - previous);
        previous = best.value();
    }
    std::reverse(ascending.begin(), ascending.end());
    return ascending;
}

} // namespace btkit
