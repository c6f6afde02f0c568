#pragma once

// Shared helpers for the test suites: independent brute-force oracles for
// lattice membership and equality (exact solves over R), plus small
// constructors used across files.

#include "btkit/btkit.hpp"
#include "btkit/random.hpp"

#include <array>
#include <string>
#include <vector>

namespace testsupport {

using namespace btkit;

inline Rat Q(const std::string& s) { return parse_rat(s); }

inline SquareMatrix mat2(const std::string& a, const std::string& b, const std::string& c,
                         const std::string& d) {
    return SquareMatrix::parse({{a, b}, {c, d}});
}

inline SquareMatrix diag2(const Rat& a, const Rat& d) {
    SquareMatrix m(2);
    m.at(0, 0) = a;
    m.at(1, 1) = d;
    return m;
}

/// w lies in the lattice spanned by the columns of basis iff the coordinate
/// solve basis * x = w lands in R^2. Independent of the canonicalization
/// path: plain 2x2 inverse.
inline bool lattice_contains(const SquareMatrix& basis, const std::array<Rat, 2>& w,
                             const PrimeConfig& cfg) {
    SquareMatrix inv = basis.inverse();
    Rat x0(inv.at(0, 0) * w[0] + inv.at(0, 1) * w[1]);
    Rat x1(inv.at(1, 0) * w[0] + inv.at(1, 1) * w[1]);
    return is_integral(x0, cfg) && is_integral(x1, cfg);
}

inline bool sublattice(const SquareMatrix& inner, const SquareMatrix& outer, const PrimeConfig& cfg) {
    return lattice_contains(outer, {inner.at(0, 0), inner.at(1, 0)}, cfg) &&
           lattice_contains(outer, {inner.at(0, 1), inner.at(1, 1)}, cfg);
}

inline bool same_lattice(const SquareMatrix& a, const SquareMatrix& b, const PrimeConfig& cfg) {
    return sublattice(a, b, cfg) && sublattice(b, a, cfg);
}

} // namespace testsupport
