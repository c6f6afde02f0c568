#pragma once

// Exact n x n matrix algebra over K, with the elementary generators and
// integrality predicates used by the Cartan reduction.

#include "btkit/valued.hpp"

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace btkit {

class SquareMatrix {
public:
    explicit SquareMatrix(int n) : n_(n), e_(static_cast<std::size_t>(n) * n, Rat(0)) {
        if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    }

    static SquareMatrix identity(int n) {
        SquareMatrix m(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static SquareMatrix diagonal(const std::vector<Rat>& d) {
        SquareMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.n_; ++i) m.at(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }

    /// Permutation matrix exchanging rows i and j under left multiplication
    /// (and columns i and j under right multiplication). Its own inverse.
    static SquareMatrix swap(int n, int i, int j) {
        if (i == j || i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("swap indices out of range");
        SquareMatrix m = identity(n);
        m.at(i, i) = 0;
        m.at(j, j) = 0;
        m.at(i, j) = 1;
        m.at(j, i) = 1;
        return m;
    }

    /// I + c * e_ij (i != j); left multiplication adds c * row j to row i,
    /// right multiplication adds c * column i to column j.
    static SquareMatrix transvection(int n, int i, int j, const Rat& c) {
        if (i == j || i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("transvection indices out of range");
        SquareMatrix m = identity(n);
        m.at(i, j) = c;
        return m;
    }

    static SquareMatrix from_rows(const std::vector<std::vector<Rat>>& rows) {
        int n = static_cast<int>(rows.size());
        SquareMatrix m(n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
                throw std::invalid_argument("matrix rows must have length n");
            for (int j = 0; j < n; ++j) m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        return m;
    }

    /// Row-major string rows, entries per format_rat / parse_rat.
    static SquareMatrix parse(const std::vector<std::vector<std::string>>& rows) {
        int n = static_cast<int>(rows.size());
        SquareMatrix m(n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
                throw std::invalid_argument("matrix rows must have length n");
            for (int j = 0; j < n; ++j)
                m.at(i, j) = parse_rat(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
        return m;
    }

    int dim() const { return n_; }

    Rat& at(int i, int j) {
        assert(i >= 0 && i < n_ && j >= 0 && j < n_);
        return e_[static_cast<std::size_t>(i) * n_ + j];
    }
    const Rat& at(int i, int j) const {
        assert(i >= 0 && i < n_ && j >= 0 && j < n_);
        return e_[static_cast<std::size_t>(i) * n_ + j];
    }

    bool is_zero() const {
        for (const Rat& x : e_)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
        return a.n_ == b.n_ && a.e_ == b.e_;
    }
    friend bool operator!=(const SquareMatrix& a, const SquareMatrix& b) { return !(a == b); }

    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        if (a.n_ != b.n_) throw std::invalid_argument("dimension mismatch");
        SquareMatrix c(a.n_);
        for (int i = 0; i < a.n_; ++i)
            for (int k = 0; k < a.n_; ++k) {
                const Rat& aik = a.at(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < a.n_; ++j) {
                    if (b.at(k, j) == 0) continue;
                    c.at(i, j) += aik * b.at(k, j);
                }
            }
        return c;
    }

    friend SquareMatrix operator*(const Rat& s, const SquareMatrix& a) {
        SquareMatrix c(a.n_);
        for (int i = 0; i < a.n_; ++i)
            for (int j = 0; j < a.n_; ++j) c.at(i, j) = s * a.at(i, j);
        return c;
    }

    // In-place elementary operations; used by the reduction algorithms to
    // accumulate transformation factors without full matrix products.
    void swap_rows(int i, int j) {
        for (int k = 0; k < n_; ++k) std::swap(at(i, k), at(j, k));
    }
    void swap_cols(int i, int j) {
        for (int k = 0; k < n_; ++k) std::swap(at(k, i), at(k, j));
    }
    void row_axpy(int dst, int src, const Rat& c) { // row dst += c * row src
        for (int k = 0; k < n_; ++k)
            if (at(src, k) != 0) at(dst, k) += c * at(src, k);
    }
    void col_axpy(int dst, int src, const Rat& c) { // col dst += c * col src
        for (int k = 0; k < n_; ++k)
            if (at(k, src) != 0) at(k, dst) += c * at(k, src);
    }
    void scale_row(int i, const Rat& c) {
        for (int k = 0; k < n_; ++k) at(i, k) *= c;
    }
    void scale_col(int j, const Rat& c) {
        for (int k = 0; k < n_; ++k) at(k, j) *= c;
    }

    Rat det() const {
        SquareMatrix a(*this);
        Rat result(1);
        for (int col = 0; col < n_; ++col) {
            int pivot = -1;
            for (int row = col; row < n_; ++row)
                if (a.at(row, col) != 0) {
                    pivot = row;
                    break;
                }
            if (pivot < 0) return Rat(0);
            if (pivot != col) {
                a.swap_rows(pivot, col);
                result = -result;
            }
            result *= a.at(col, col);
            for (int row = col + 1; row < n_; ++row) {
                if (a.at(row, col) == 0) continue;
                Rat c(-a.at(row, col) / a.at(col, col));
                a.row_axpy(row, col, c);
            }
        }
        return result;
    }

    SquareMatrix inverse() const {
        SquareMatrix a(*this);
        SquareMatrix inv = identity(n_);
        for (int col = 0; col < n_; ++col) {
            int pivot = -1;
            for (int row = col; row < n_; ++row)
                if (a.at(row, col) != 0) {
                    pivot = row;
                    break;
                }
            if (pivot < 0) throw std::domain_error("not invertible");
            if (pivot != col) {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            Rat scale(Rat(1) / a.at(col, col));
            a.scale_row(col, scale);
            inv.scale_row(col, scale);
            for (int row = 0; row < n_; ++row) {
                if (row == col || a.at(row, col) == 0) continue;
                Rat c(-a.at(row, col));
                a.row_axpy(row, col, c);
                inv.row_axpy(row, col, c);
            }
        }
        return inv;
    }

private:
    int n_;
    std::vector<Rat> e_;
};

/// An element of GL_n(K), carrying its exact inverse.
class InvertibleMatrix {
public:
    explicit InvertibleMatrix(SquareMatrix m) : mat_(m), inv_(m.inverse()) {}

    /// Trusting constructor for callers that already hold the inverse.
    static InvertibleMatrix from_parts(SquareMatrix m, SquareMatrix inv) {
        assert(m * inv == SquareMatrix::identity(m.dim()));
        return InvertibleMatrix(std::move(m), std::move(inv));
    }

    static InvertibleMatrix identity(int n) {
        return from_parts(SquareMatrix::identity(n), SquareMatrix::identity(n));
    }

    const SquareMatrix& matrix() const { return mat_; }
    const SquareMatrix& inverse() const { return inv_; }
    int dim() const { return mat_.dim(); }

private:
    InvertibleMatrix(SquareMatrix m, SquareMatrix inv) : mat_(std::move(m)), inv_(std::move(inv)) {}

    SquareMatrix mat_;
    SquareMatrix inv_;
};

inline SquareMatrix inverse(const SquareMatrix& a) { return a.inverse(); }

/// Minimum additive valuation over all entries; infinity iff the matrix is 0.
/// (Under the norm convention this is the supremum of the entry norms.)
inline Valuation min_valuation(const SquareMatrix& g, const PrimeConfig& cfg) {
    Valuation best = Valuation::infinity();
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j) best = min(best, valuation(g.at(i, j), cfg));
    return best;
}

/// g ∈ GL_n(R): every entry integral and det a unit of R.
inline bool is_unimodular(const SquareMatrix& g, const PrimeConfig& cfg) {
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j)
            if (!is_integral(g.at(i, j), cfg)) return false;
    return valuation(g.det(), cfg) == Valuation::finite(0);
}

/// Diagonal with antitone additive valuations: v(d_0) >= ... >= v(d_{n-1}).
inline bool is_monotone_diag(const SquareMatrix& g, const PrimeConfig& cfg) {
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j)
            if (i != j && g.at(i, j) != 0) return false;
    for (int i = 0; i + 1 < g.dim(); ++i)
        if (valuation(g.at(i, i), cfg) < valuation(g.at(i + 1, i + 1), cfg)) return false;
    return true;
}

} // namespace btkit
