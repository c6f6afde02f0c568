#pragma once

// Seeded random element generation for property tests and the CLI self-test:
// bounded rationals, invertible matrices, GL_n(R) elements built as products
// of elementary factors (no rejection on the predicate), and SL_2 elements as
// products of transvections.

#include "btkit/lattice.hpp"
#include "btkit/matrix.hpp"
#include "btkit/valued.hpp"

#include <random>

namespace btkit {

using Rng = std::mt19937_64;

inline long rand_range(Rng& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rat random_rat(Rng& rng, long num_bound = 10000, long den_bound = 10000) {
    Rat q(rand_range(rng, -num_bound, num_bound), rand_range(rng, 1, den_bound));
    q.canonicalize();
    return q;
}

inline Rat random_nonzero_rat(Rng& rng, long num_bound = 10000, long den_bound = 10000) {
    for (;;) {
        Rat q = random_rat(rng, num_bound, den_bound);
        if (q != 0) return q;
    }
}

/// Random element of R: denominator coprime to p.
inline Rat random_integral(Rng& rng, const PrimeConfig& cfg, long bound = 50) {
    long den;
    do {
        den = rand_range(rng, 1, bound);
    } while (den % static_cast<long>(cfg.p()) == 0);
    Rat q(rand_range(rng, -bound, bound), den);
    q.canonicalize();
    return q;
}

/// Random unit of R: numerator and denominator both coprime to p.
inline Rat random_unit(Rng& rng, const PrimeConfig& cfg, long bound = 50) {
    for (;;) {
        Rat q = random_integral(rng, cfg, bound);
        if (q != 0 && valuation(q, cfg) == Valuation::finite(0)) return q;
    }
}

inline SquareMatrix random_invertible(Rng& rng, int n, long bound = 10000) {
    for (;;) {
        SquareMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = random_rat(rng, bound, bound);
        if (m.det() != 0) return m;
    }
}

/// Random element of GL_n(R): a bounded product of R-integral transvections,
/// diagonal unit matrices and swaps.
inline SquareMatrix random_unimodular(Rng& rng, int n, const PrimeConfig& cfg, int factors = 8) {
    SquareMatrix m = SquareMatrix::identity(n);
    for (int step = 0; step < factors; ++step) {
        switch (rand_range(rng, 0, 2)) {
        case 0: {
            int i = static_cast<int>(rand_range(rng, 0, n - 1));
            int j = static_cast<int>(rand_range(rng, 0, n - 2));
            if (j >= i) ++j;
            m = m * SquareMatrix::transvection(n, i, j, random_integral(rng, cfg, 9));
            break;
        }
        case 1: {
            std::vector<Rat> d;
            for (int i = 0; i < n; ++i) d.push_back(random_unit(rng, cfg, 9));
            m = m * SquareMatrix::diagonal(d);
            break;
        }
        default: {
            if (n < 2) break;
            int i = static_cast<int>(rand_range(rng, 0, n - 1));
            int j = static_cast<int>(rand_range(rng, 0, n - 2));
            if (j >= i) ++j;
            m = m * SquareMatrix::swap(n, i, j);
            break;
        }
        }
    }
    return m;
}

/// Random determinant-1 element of GL_2(K): product of transvections with
/// arbitrary rational (mixed-valuation) coefficients.
inline SquareMatrix random_sl2(Rng& rng, long bound = 20, int factors = 6) {
    SquareMatrix m = SquareMatrix::identity(2);
    for (int step = 0; step < factors; ++step) {
        int upper = rand_range(rng, 0, 1) == 0;
        Rat c = random_rat(rng, bound, bound);
        m = m * SquareMatrix::transvection(2, upper ? 0 : 1, upper ? 1 : 0, c);
    }
    return m;
}

inline LatticeRep random_lattice(Rng& rng, long bound = 100) {
    return LatticeRep(random_invertible(rng, 2, bound));
}

} // namespace btkit
