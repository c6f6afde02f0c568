#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>

using namespace btkit;
using testsupport::mat2;
using testsupport::Q;

namespace {

bool antitone(const std::vector<long>& f) { return std::is_sorted(f.rbegin(), f.rend()); }

void check_factorisation(const SquareMatrix& g, const CartanFactorisation& cf, const PrimeConfig& cfg) {
    REQUIRE(is_unimodular(cf.k1.matrix(), cfg));
    REQUIRE(is_unimodular(cf.k2.matrix(), cfg));
    REQUIRE(antitone(cf.f));
    CHECK(cf.k1.matrix() * g * cf.k2.matrix() == cf.diagonal(cfg));
    CHECK(cf.k1.matrix() * cf.k1.inverse() == SquareMatrix::identity(g.dim()));
    CHECK(cf.k2.matrix() * cf.k2.inverse() == SquareMatrix::identity(g.dim()));
}

} // namespace

TEST_CASE("corner normalization") {
    PrimeConfig p3(3);

    SquareMatrix g1 = testsupport::diag2(Rat(3), Rat(1));
    auto [a1, b1] = normalize_corner(g1, p3);
    CHECK(valuation((a1 * g1 * b1).at(1, 1), p3) == Valuation::finite(0));
    CHECK(a1 == SquareMatrix::identity(2));
    CHECK(b1 == SquareMatrix::identity(2));

    SquareMatrix g2 = testsupport::diag2(Q("1/3"), Rat(1));
    auto [a2, b2] = normalize_corner(g2, p3);
    CHECK(valuation((a2 * g2 * b2).at(1, 1), p3) == Valuation::finite(-1));

    // unique minimal entry away from the corner: moved by one row and one
    // column swap, and the corner attains the brute-force minimum
    SquareMatrix g3 = mat2("9", "1/9", "3", "27");
    auto [a3, b3] = normalize_corner(g3, p3);
    SquareMatrix moved = a3 * g3 * b3;
    CHECK(valuation(moved.at(1, 1), p3) == min_valuation(g3, p3));
    CHECK(is_unimodular(a3, p3));
    CHECK(is_unimodular(b3, p3));

    // 3 x 3 with the unique minimum at (0,1): one row and one column swap
    SquareMatrix g4 = SquareMatrix::from_rows({{Rat(3), Q("1/9"), Rat(1)},
                                               {Rat(1), Rat(9), Rat(3)},
                                               {Rat(9), Rat(3), Rat(1)}});
    auto [a4, b4] = normalize_corner(g4, p3);
    CHECK(a4 == SquareMatrix::swap(3, 0, 2));
    CHECK(b4 == SquareMatrix::swap(3, 1, 2));
    CHECK(valuation((a4 * g4 * b4).at(2, 2), p3) == min_valuation(g4, p3));

    CHECK_THROWS_AS(normalize_corner(SquareMatrix(2), p3), std::domain_error);
}

TEST_CASE("reduction to monotone diagonal") {
    PrimeConfig p2(2);

    DiagonalReduction r1 = reduce_to_monotone_diag(SquareMatrix::identity(2), p2);
    CHECK(r1.reduced == SquareMatrix::identity(2));
    CHECK(is_monotone_diag(r1.reduced, p2));

    DiagonalReduction r2 = reduce_to_monotone_diag(testsupport::diag2(Rat(1), Rat(2)), p2);
    CHECK(r2.reduced == testsupport::diag2(Rat(2), Rat(1)));

    // valuations of the reduced diagonal cross-checked against the
    // determinantal oracle: det valuation 1, minimal entry valuation 0
    SquareMatrix g = mat2("1", "1", "1", "3");
    DiagonalReduction r3 = reduce_to_monotone_diag(g, p2);
    REQUIRE(is_monotone_diag(r3.reduced, p2));
    CHECK(valuation(r3.reduced.at(0, 0), p2) == Valuation::finite(1));
    CHECK(valuation(r3.reduced.at(1, 1), p2) == Valuation::finite(0));
    CHECK(is_unimodular(r3.k1.matrix(), p2));
    CHECK(is_unimodular(r3.k2.matrix(), p2));
    CHECK(r3.k1.matrix() * g * r3.k2.matrix() == r3.reduced);
    CHECK(min_valuation(r3.reduced, p2) == min_valuation(g, p2));
}

TEST_CASE("cartan decomposition examples") {
    PrimeConfig p3(3);

    CartanFactorisation c1 = cartan_decompose(SquareMatrix::identity(2), p3);
    CHECK(c1.f == std::vector<long>{0, 0});
    check_factorisation(SquareMatrix::identity(2), c1, p3);

    SquareMatrix g2 = testsupport::diag2(Rat(1), Rat(3));
    CartanFactorisation c2 = cartan_decompose(g2, p3);
    CHECK(c2.f == std::vector<long>{1, 0});
    check_factorisation(g2, c2, p3);

    SquareMatrix g3 = mat2("1", "1/3", "0", "1");
    CartanFactorisation c3 = cartan_decompose(g3, p3);
    CHECK(c3.f == std::vector<long>{1, -1});
    CHECK(c3.f == invariant_exponents(g3, p3));
    check_factorisation(g3, c3, p3);

    CHECK_THROWS_AS(cartan_decompose(mat2("1", "2", "2", "4"), p3), std::domain_error);
}

TEST_CASE("invariant exponents oracle") {
    PrimeConfig p3(3);
    CHECK(invariant_exponents(testsupport::diag2(Rat(9), Rat(1)), p3) == std::vector<long>{2, 0});
    CHECK(invariant_exponents(mat2("1", "1/3", "0", "1"), p3) == std::vector<long>{1, -1});

    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        SquareMatrix r = random_unimodular(rng, 3, p3);
        CHECK(invariant_exponents(r, p3) == std::vector<long>{0, 0, 0});
    }
    CHECK_THROWS_AS(invariant_exponents(mat2("1", "2", "2", "4"), p3), std::domain_error);
}

TEST_CASE("dimension extremes") {
    PrimeConfig p5(5);

    SquareMatrix tiny(1);
    tiny.at(0, 0) = Rat(75); // 3 * 5^2
    CartanFactorisation cf = cartan_decompose(tiny, p5);
    CHECK(cf.f == std::vector<long>{2});
    CHECK(cf.k1.matrix() * tiny * cf.k2.matrix() == cf.diagonal(p5));

    Rng rng(66);
    for (int trial = 0; trial < 3; ++trial) {
        SquareMatrix g = random_invertible(rng, 5, 50);
        CartanFactorisation big = cartan_decompose(g, p5);
        check_factorisation(g, big, p5);
        CHECK(big.f == invariant_exponents(g, p5));
    }
}

TEST_CASE("roundtrip, uniqueness and oracle agreement on random matrices") {
    for (unsigned long p : {2ul, 5ul}) {
        PrimeConfig cfg(p);
        Rng rng(4242 + p);
        for (int trial = 0; trial < 60; ++trial) {
            int n = 2 + static_cast<int>(rand_range(rng, 0, 2));
            SquareMatrix g = random_invertible(rng, n, 1000);
            CartanFactorisation cf = cartan_decompose(g, cfg);
            check_factorisation(g, cf, cfg);
            CHECK(cf.f == invariant_exponents(g, cfg));

            long total = 0;
            for (long e : cf.f) total += e;
            CHECK(total == valuation(g.det(), cfg).value());

            SquareMatrix r = random_unimodular(rng, n, cfg);
            SquareMatrix s = random_unimodular(rng, n, cfg);
            CHECK(cartan_decompose(r * g * s, cfg).f == cf.f);

            // coarse decomposition: diagonal with unimodular factors
            DiagonalReduction red = reduce_to_monotone_diag(g, cfg);
            CHECK(is_monotone_diag(red.reduced, cfg));
            CHECK(red.k1.matrix() * g * red.k2.matrix() == red.reduced);
        }
    }
}
