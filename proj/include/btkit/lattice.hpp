#pragma once

// R-lattices in K^2, canonical representatives, homothety classes (tree
// vertices), the normal basis pair of two lattices, the distance function,
// and the GL_2(K) action with parity.

#include "btkit/cartan.hpp"
#include "btkit/matrix.hpp"
#include "btkit/valued.hpp"

#include <array>
#include <cassert>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace btkit {

/// A lattice given by a basis: the columns of an invertible 2 x 2 matrix
/// span the lattice over R.
struct LatticeRep {
    SquareMatrix basis;

    explicit LatticeRep(SquareMatrix b) : basis(std::move(b)) {
        if (basis.dim() != 2) throw std::invalid_argument("lattice bases are 2 x 2");
        if (basis.det() == 0) throw std::domain_error("basis columns must be independent");
    }

    static LatticeRep standard() { return LatticeRep(SquareMatrix::identity(2)); }
};

/// Canonical representative of y modulo p^c R: the unique element m / p^t of
/// the class with t >= 0 minimal and 0 <= m / p^t < p^c. Integral classes get
/// an ordinary integer in [0, p^c).
inline Rat reduce_mod_uniformiser_power(const Rat& y, long c, const PrimeConfig& cfg) {
    Valuation vy = valuation(y, cfg);
    if (vy >= Valuation::finite(c)) return Rat(0);
    long t = vy.value() < 0 ? -vy.value() : 0;
    Rat z(y * cfg.uniformiser_pow(t)); // integral, and a unit when t > 0
    Int modulus;
    mpz_pow_ui(modulus.get_mpz_t(), cfg.uniformiser().get_mpz_t(), static_cast<unsigned long>(c + t));
    Int inv_den;
    if (mpz_invert(inv_den.get_mpz_t(), z.get_den().get_mpz_t(), modulus.get_mpz_t()) == 0)
        throw std::logic_error("denominator not invertible modulo p^k");
    Int m((z.get_num() * inv_den) % modulus);
    if (m < 0) m += modulus;
    if (t == 0) return Rat(m);
    Int denom;
    mpz_pow_ui(denom.get_mpz_t(), cfg.uniformiser().get_mpz_t(), static_cast<unsigned long>(t));
    return Rat(m, denom); // coprime: v_p(m) = 0 when t > 0
}

/// Canonical lattice: the column span of [[p^a, 0], [b, p^c]], i.e. of the
/// basis vectors (p^a, b) and (0, p^c), with b the canonical representative
/// of its class modulo p^c R. Two values are equal iff the lattices are.
struct CanonicalLattice {
    long a = 0;
    long c = 0;
    Rat b = 0;

    SquareMatrix basis_matrix(const PrimeConfig& cfg) const {
        SquareMatrix m(2);
        m.at(0, 0) = cfg.uniformiser_pow(a);
        m.at(1, 0) = b;
        m.at(1, 1) = cfg.uniformiser_pow(c);
        return m;
    }

    friend bool operator==(const CanonicalLattice& x, const CanonicalLattice& y) {
        return x.a == y.a && x.c == y.c && x.b == y.b;
    }
    friend bool operator!=(const CanonicalLattice& x, const CanonicalLattice& y) { return !(x == y); }
    friend bool operator<(const CanonicalLattice& x, const CanonicalLattice& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.c != y.c) return x.c < y.c;
        return x.b < y.b;
    }
};

inline std::string format_triple(const CanonicalLattice& t) {
    return "(" + std::to_string(t.a) + "," + std::to_string(t.c) + "," + format_rat(t.b) + ")";
}

/// Column Hermite reduction over R: swaps, unit scalings and R-integral
/// column additions (all right multiplications by GL_2(R) elements) bring the
/// basis to [[p^a, 0], [b, p^c]]; the result is basis-independent.
inline CanonicalLattice canonicalize(const LatticeRep& lattice, const PrimeConfig& cfg) {
    SquareMatrix m = lattice.basis;
    if (valuation(m.at(0, 0), cfg) > valuation(m.at(0, 1), cfg)) m.swap_cols(0, 1);
    if (m.at(0, 1) != 0) m.col_axpy(1, 0, Rat(-m.at(0, 1) / m.at(0, 0)));
    CanonicalLattice t;
    t.a = valuation(m.at(0, 0), cfg).value();
    m.scale_col(0, Rat(cfg.uniformiser_pow(t.a) / m.at(0, 0)));
    t.c = valuation(m.at(1, 1), cfg).value();
    t.b = reduce_mod_uniformiser_power(m.at(1, 0), t.c, cfg);
    return t;
}

/// A tree vertex: the homothety class of a lattice, represented by the unique
/// canonical lattice in the class with min(a, c) = 0.
struct Vertex {
    CanonicalLattice rep;

    static Vertex standard() { return Vertex{CanonicalLattice{}}; }

    friend bool operator==(const Vertex& x, const Vertex& y) { return x.rep == y.rep; }
    friend bool operator!=(const Vertex& x, const Vertex& y) { return !(x == y); }
    friend bool operator<(const Vertex& x, const Vertex& y) { return x.rep < y.rep; }
};

inline Vertex vertex_of(const CanonicalLattice& t, const PrimeConfig& cfg) {
    long shift = t.a < t.c ? t.a : t.c;
    if (shift == 0) return Vertex{t};
    CanonicalLattice r;
    r.a = t.a - shift;
    r.c = t.c - shift;
    r.b = reduce_mod_uniformiser_power(Rat(t.b / cfg.uniformiser_pow(shift)), r.c, cfg);
    return Vertex{r};
}

inline Vertex vertex_of(const LatticeRep& lattice, const PrimeConfig& cfg) {
    return vertex_of(canonicalize(lattice, cfg), cfg);
}

/// The generators span a lattice iff their matrix has rank 2 over K.
inline bool is_lattice(const std::vector<std::array<Rat, 2>>& generators) {
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j)
            if (generators[i][0] * generators[j][1] != generators[i][1] * generators[j][0]) return true;
    return false;
}

/// Reduce an arbitrary generating set to a 2-column basis by column
/// operations over R (the R-span is preserved).
inline LatticeRep lattice_from_generators(std::vector<std::array<Rat, 2>> gens, const PrimeConfig& cfg) {
    auto pivot_for_row = [&](int row, std::size_t from) {
        Valuation best = Valuation::infinity();
        std::size_t pos = gens.size();
        for (std::size_t j = from; j < gens.size(); ++j) {
            Valuation v = valuation(gens[j][static_cast<std::size_t>(row)], cfg);
            if (v < best) {
                best = v;
                pos = j;
            }
        }
        return pos;
    };
    std::size_t first = pivot_for_row(0, 0);
    if (first == gens.size()) throw std::domain_error("generators do not span K^2");
    std::swap(gens[0], gens[first]);
    for (std::size_t j = 1; j < gens.size(); ++j) {
        if (gens[j][0] == 0) continue;
        Rat coeff(-gens[j][0] / gens[0][0]); // in R: the pivot valuation is minimal
        gens[j][0] = 0;
        gens[j][1] += coeff * gens[0][1];
    }
    std::size_t second = pivot_for_row(1, 1);
    if (second == gens.size()) throw std::domain_error("generators do not span K^2");
    std::swap(gens[1], gens[second]);
    SquareMatrix basis(2);
    basis.at(0, 0) = gens[0][0];
    basis.at(1, 0) = gens[0][1];
    basis.at(0, 1) = gens[1][0];
    basis.at(1, 1) = gens[1][1];
    return LatticeRep(basis);
}

/// An ordered basis of M together with the antitone exponent pair: the
/// columns of `basis` generate M over R, and the columns of
/// basis * diag(p^{f_0}, p^{f_1}) generate the second lattice L.
struct NormalBasisPair {
    InvertibleMatrix basis;
    std::array<long, 2> exponents;
};

inline NormalBasisPair normal_basis_pair(const LatticeRep& m, const LatticeRep& l, const PrimeConfig& cfg) {
    CartanFactorisation cf = cartan_decompose(m.basis.inverse() * l.basis, cfg);
    SquareMatrix basis = m.basis * cf.k1.inverse();
    return {InvertibleMatrix(basis), {cf.f[0], cf.f[1]}};
}

/// d(M, L) = f_0 - f_1; symmetric, homothety-invariant, zero iff the two
/// lattices lie in the same homothety class.
inline long dist(const LatticeRep& m, const LatticeRep& l, const PrimeConfig& cfg) {
    CartanFactorisation cf = cartan_decompose(m.basis.inverse() * l.basis, cfg);
    return cf.f[0] - cf.f[1];
}

inline long vertex_dist(const Vertex& v, const Vertex& w, const PrimeConfig& cfg) {
    return dist(LatticeRep(v.rep.basis_matrix(cfg)), LatticeRep(w.rep.basis_matrix(cfg)), cfg);
}

inline LatticeRep act(const SquareMatrix& g, const LatticeRep& l) { return LatticeRep(g * l.basis); }

inline Vertex act_vertex(const SquareMatrix& g, const Vertex& v, const PrimeConfig& cfg) {
    return vertex_of(act(g, LatticeRep(v.rep.basis_matrix(cfg))), cfg);
}

/// v(det basis); basis-independent because base changes are unimodular.
inline long lattice_valuation(const LatticeRep& l, const PrimeConfig& cfg) {
    return valuation(l.basis.det(), cfg).value();
}

inline bool is_even(const LatticeRep& l, const PrimeConfig& cfg) {
    return lattice_valuation(l, cfg) % 2 == 0;
}

/// Homothety shifts the valuation by an even amount, so parity descends
/// to vertices; for the canonical representative it is (a + c) mod 2.
inline bool is_even(const Vertex& v) { return (v.rep.a + v.rep.c) % 2 == 0; }

} // namespace btkit
