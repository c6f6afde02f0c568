#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <map>

using namespace btkit;

namespace {

std::vector<Int> random_vertex_function(Rng& rng, int count, long bound = 999) {
    std::vector<Int> f;
    f.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) f.emplace_back(rand_range(rng, -bound, bound));
    return f;
}

WeightFunction<int> random_sign_weight(Rng& rng, const Ball& b) {
    WeightFunction<int> w;
    for (std::size_t i = 0; i < b.vertices.size(); ++i) {
        int s = rand_range(rng, 0, 1) == 0 ? 1 : -1;
        w.push_back(Unit<int>{s, s});
    }
    return w;
}

/// Edge values keyed by endpoint triples; lets cochains on different balls
/// be compared on their common edge set.
std::map<std::pair<std::string, std::string>, Int> by_triples(const Ball& b, const std::vector<Int>& h) {
    std::map<std::pair<std::string, std::string>, Int> out;
    for (std::size_t e = 0; e < b.edges.size(); ++e)
        out[{format_triple(b.vertices[static_cast<std::size_t>(b.edges[e].u)].rep),
             format_triple(b.vertices[static_cast<std::size_t>(b.edges[e].v)].rep)}] = h[e];
    return out;
}

} // namespace

TEST_CASE("parity weight") {
    PrimeConfig p2(2);
    Vertex v0 = Vertex::standard();
    CHECK(parity_weight(v0) == 1);
    for (const Vertex& w : neighbours(v0, p2)) CHECK(parity_weight(w) == -1);
    Ball b = ball(v0, 2, p2);
    for (std::size_t i = 0; i < b.vertices.size(); ++i)
        if (b.dist_to_root[i] == 2) CHECK(parity_weight(b.vertices[i]) == 1);
}

TEST_CASE("laplace evaluation") {
    PrimeConfig p2(2);
    Ball b = ball(Vertex::standard(), 2, p2);
    WeightFunction<int> trivial = make_trivial_weight<int>(b);

    std::vector<Int> ones(b.edges.size(), Int(1));
    CHECK(laplace_at(b, trivial, ones, 0) == Int(3));

    std::vector<Int> zeros(b.edges.size(), Int(0));
    for (const Int& value : laplace(b, trivial, zeros)) CHECK(value == 0);

    WeightFunction<int> parity = make_parity_weight<int>(b);
    std::vector<Int> lap = laplace(b, parity, ones);
    for (int v = 0; v < b.interior_count; ++v) {
        int degree = static_cast<int>(b.adjacency[static_cast<std::size_t>(v)].size());
        CHECK(lap[static_cast<std::size_t>(v)] == Int(parity_weight(b.vertices[static_cast<std::size_t>(v)]) * degree));
    }

    int boundary = static_cast<int>(b.vertices.size()) - 1;
    CHECK_THROWS_AS(laplace_at(b, trivial, ones, boundary), std::domain_error);
}

TEST_CASE("orientation of a ball") {
    PrimeConfig p2(2);
    Ball b = ball(Vertex::standard(), 3, p2);
    OrientedEdgeInfo info = orient(b);

    for (std::size_t e = 0; e < b.edges.size(); ++e)
        CHECK(b.dist_to_root[static_cast<std::size_t>(info.source[e])] + 1 ==
              b.dist_to_root[static_cast<std::size_t>(info.target[e])]);

    CHECK(info.inbound_edge[0] == -1);
    for (std::size_t v = 1; v < b.vertices.size(); ++v) {
        REQUIRE(info.inbound_edge[v] >= 0);
        CHECK(info.target[static_cast<std::size_t>(info.inbound_edge[v])] == static_cast<int>(v));
        // E_v = Out_v ∪ {o_v}, disjointly
        CHECK(info.outward[v].size() + 1 == b.adjacency[v].size());
    }
    CHECK(info.outward[0].size() == b.adjacency[0].size());

    // interior non-root vertices have |Out_v| = degree - 1 = p
    for (int v = 1; v < b.interior_count; ++v)
        CHECK(info.outward[static_cast<std::size_t>(v)].size() == 2);
}

TEST_CASE("distinguished edges") {
    PrimeConfig p2(2);
    Ball b = ball(Vertex::standard(), 2, p2);
    OrientedEdgeInfo info = orient(b);

    int d0 = distinguished_edge(b, info, 0);
    Vertex target = b.vertices[static_cast<std::size_t>(info.target[static_cast<std::size_t>(d0)])];
    for (int e : info.outward[0])
        CHECK_FALSE(b.vertices[static_cast<std::size_t>(info.target[static_cast<std::size_t>(e)])] < target);

    // stable across reconstruction
    Ball again = ball(Vertex::standard(), 2, p2);
    CHECK(distinguished_edge(again, orient(again), 0) == d0);

    int leaf = static_cast<int>(b.vertices.size()) - 1;
    CHECK_THROWS_AS(distinguished_edge(b, info, leaf), std::domain_error);
}

TEST_CASE("preimage construction, base and border cases") {
    PrimeConfig p2(2);
    Ball b = ball(Vertex::standard(), 2, p2);
    OrientedEdgeInfo info = orient(b);
    WeightFunction<int> trivial = make_trivial_weight<int>(b);

    std::vector<Int> f(static_cast<std::size_t>(b.interior_count), Int(0));
    f[0] = 1; // indicator of the root
    std::vector<Int> h = laplace_preimage(b, trivial, f);

    int d0 = distinguished_edge(b, info, 0);
    for (int e : info.outward[0]) CHECK(h[static_cast<std::size_t>(e)] == (e == d0 ? Int(1) : Int(0)));
    for (int v = 1; v < b.interior_count; ++v) {
        int dv = distinguished_edge(b, info, v);
        Int inbound = h[static_cast<std::size_t>(info.inbound_edge[static_cast<std::size_t>(v)])];
        for (int e : info.outward[static_cast<std::size_t>(v)])
            CHECK(h[static_cast<std::size_t>(e)] == (e == dv ? Int(-inbound) : Int(0)));
    }
    std::vector<Int> lap = laplace(b, trivial, h);
    for (int v = 0; v < b.interior_count; ++v) CHECK(lap[static_cast<std::size_t>(v)] == f[static_cast<std::size_t>(v)]);

    // preimage of zero is harmonic on the interior (here: identically zero)
    std::vector<Int> zero_f(static_cast<std::size_t>(b.interior_count), Int(0));
    std::vector<Int> hz = laplace_preimage(b, trivial, zero_f);
    CHECK(is_harmonic(b, hz));

    CHECK_THROWS_AS(laplace_preimage(ball(Vertex::standard(), 0, p2), WeightFunction<int>{Unit<int>{1, 1}},
                                     std::vector<Int>{}),
                    std::domain_error);
}

TEST_CASE("surjectivity on random data") {
    PrimeConfig p2(2);
    Ball b = ball(Vertex::standard(), 5, p2);
    Rng rng(606);
    WeightFunction<int> parity = make_parity_weight<int>(b);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Int> f = random_vertex_function(rng, b.interior_count);
        std::vector<Int> h = laplace_preimage(b, parity, f);
        std::vector<Int> lap = laplace(b, parity, h);
        for (int v = 0; v < b.interior_count; ++v)
            CHECK(lap[static_cast<std::size_t>(v)] == f[static_cast<std::size_t>(v)]);
    }
}

TEST_CASE("is_harmonic") {
    PrimeConfig p2(2);
    Ball b = ball(Vertex::standard(), 2, p2);
    std::vector<Int> zeros(b.edges.size(), Int(0));
    CHECK(is_harmonic(b, zeros));
    std::vector<Int> ones(b.edges.size(), Int(1));
    CHECK_FALSE(is_harmonic(b, ones));

    // a preimage of zero under the parity weight is harmonic
    WeightFunction<int> parity = make_parity_weight<int>(b);
    std::vector<Int> zero_f(static_cast<std::size_t>(b.interior_count), Int(0));
    CHECK(is_harmonic(b, laplace_preimage(b, parity, zero_f)));
}

TEST_CASE("two preimages differ by a harmonic cochain") {
    PrimeConfig p2(2);
    Ball b = ball(Vertex::standard(), 3, p2);
    OrientedEdgeInfo info = orient(b);
    WeightFunction<int> parity = make_parity_weight<int>(b);
    Rng rng(4040);
    std::vector<Int> f = random_vertex_function(rng, b.interior_count);

    std::vector<Int> h1 = laplace_preimage(b, parity, f);

    // alternate global choice: lexicographically largest outward target
    std::vector<int> alt(static_cast<std::size_t>(b.interior_count));
    for (int v = 0; v < b.interior_count; ++v) {
        const std::vector<int>& cone = info.outward[static_cast<std::size_t>(v)];
        int best = cone[0];
        for (int e : cone)
            if (b.vertices[static_cast<std::size_t>(info.target[static_cast<std::size_t>(best)])] <
                b.vertices[static_cast<std::size_t>(info.target[static_cast<std::size_t>(e)])])
                best = e;
        alt[static_cast<std::size_t>(v)] = best;
    }
    std::vector<Int> h2 = laplace_preimage_with(b, info, alt, parity, f);

    CHECK(h1 != h2);
    std::vector<Int> diff;
    for (std::size_t e = 0; e < h1.size(); ++e) diff.push_back(Int(h1[e] - h2[e]));
    CHECK(is_harmonic(b, diff));

    std::vector<Int> lap = laplace(b, parity, h2);
    for (int v = 0; v < b.interior_count; ++v) CHECK(lap[static_cast<std::size_t>(v)] == f[static_cast<std::size_t>(v)]);
}

TEST_CASE("radius extension keeps the constructed cochain") {
    PrimeConfig p2(2);
    Ball small = ball(Vertex::standard(), 3, p2);
    Ball big = ball(Vertex::standard(), 4, p2);
    Rng rng(7321);

    std::vector<Int> f_big = random_vertex_function(rng, big.interior_count);
    std::vector<Int> f_small(static_cast<std::size_t>(small.interior_count));
    for (int v = 0; v < small.interior_count; ++v) {
        int in_big = big.find(small.vertices[static_cast<std::size_t>(v)]);
        REQUIRE(in_big >= 0);
        f_small[static_cast<std::size_t>(v)] = f_big[static_cast<std::size_t>(in_big)];
    }

    WeightFunction<int> ws = make_parity_weight<int>(small);
    WeightFunction<int> wb = make_parity_weight<int>(big);
    auto hs = by_triples(small, laplace_preimage(small, ws, f_small));
    auto hb = by_triples(big, laplace_preimage(big, wb, f_big));
    for (const auto& [key, value] : hs) {
        REQUIRE(hb.count(key) == 1);
        CHECK(hb[key] == value);
    }
}

TEST_CASE("weight factorization identity") {
    PrimeConfig p2(2);
    Ball b = ball(Vertex::standard(), 3, p2);
    Rng rng(515151);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Int> h;
        for (std::size_t e = 0; e < b.edges.size(); ++e) h.emplace_back(rand_range(rng, -50, 50));
        CHECK(weight_factorization_check(b, make_parity_weight<int>(b), h));
        CHECK(weight_factorization_check(b, random_sign_weight(rng, b), h));
        CHECK(weight_factorization_check(b, make_trivial_weight<int>(b), h));
    }
}

TEST_CASE("stabilizer elements commute with the laplacian") {
    PrimeConfig p2(2);
    Ball b = ball(Vertex::standard(), 3, p2);
    Rng rng(8888);
    WeightFunction<int> parity = make_parity_weight<int>(b);
    for (int trial = 0; trial < 10; ++trial) {
        SquareMatrix g(Rat(random_nonzero_rat(rng, 20, 20)) * random_unimodular(rng, 2, p2));
        REQUIRE(stabilizes_standard(g, p2));

        // the action permutes each distance sphere of the ball
        std::vector<int> vertex_map(b.vertices.size());
        for (std::size_t i = 0; i < b.vertices.size(); ++i) {
            int j = b.find(act_vertex(g, b.vertices[i], p2));
            REQUIRE(j >= 0);
            REQUIRE(b.dist_to_root[static_cast<std::size_t>(j)] == b.dist_to_root[i]);
            vertex_map[i] = j;
        }
        std::map<std::pair<int, int>, int> edge_index;
        for (std::size_t e = 0; e < b.edges.size(); ++e)
            edge_index[std::minmax(b.edges[e].u, b.edges[e].v)] = static_cast<int>(e);

        std::vector<Int> h;
        for (std::size_t e = 0; e < b.edges.size(); ++e) h.emplace_back(rand_range(rng, -50, 50));
        std::vector<Int> pulled(b.edges.size());
        for (std::size_t e = 0; e < b.edges.size(); ++e) {
            auto key = std::minmax(vertex_map[static_cast<std::size_t>(b.edges[e].u)],
                                   vertex_map[static_cast<std::size_t>(b.edges[e].v)]);
            REQUIRE(edge_index.count(key) == 1);
            pulled[e] = h[static_cast<std::size_t>(edge_index[key])];
        }
        // Δ(h ∘ g)(v) = Δ(h)(g v) on the interior
        for (int v = 0; v < b.interior_count; ++v)
            CHECK(laplace_at(b, parity, pulled, v) ==
                  laplace_at(b, parity, h, vertex_map[static_cast<std::size_t>(v)]));
    }
}

TEST_CASE("finite graph solver") {
    // even cycle: the alternating-sign certificate obstructs solving
    FiniteGraph square(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    std::vector<Rat> trivial_w(4, Rat(1));
    LaplaceSolution s1 = laplace_solve(square, trivial_w, {Rat(1), Rat(0), Rat(0), Rat(0)});
    REQUIRE_FALSE(s1.feasible);
    REQUIRE(s1.certificate.size() == 4);
    // verify the certificate: y^T A = 0 but y^T f != 0
    for (auto [u, v] : square.edges) CHECK(Rat(s1.certificate[static_cast<std::size_t>(u)] + s1.certificate[static_cast<std::size_t>(v)]) == 0);
    CHECK(s1.certificate[0] != 0);

    FiniteGraph segment(2, {{0, 1}});
    LaplaceSolution s2 = laplace_solve(segment, {Rat(1), Rat(1)}, {Rat(1), Rat(-1)});
    CHECK_FALSE(s2.feasible);

    // odd cycle: invertible incidence system, always feasible over Q
    FiniteGraph triangle(3, {{0, 1}, {1, 2}, {2, 0}});
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rat> f{random_rat(rng, 40, 10), random_rat(rng, 40, 10), random_rat(rng, 40, 10)};
        LaplaceSolution s3 = laplace_solve(triangle, {Rat(1), Rat(1), Rat(1)}, f);
        REQUIRE(s3.feasible);
        for (int v = 0; v < 3; ++v) {
            Rat total(0);
            for (std::size_t e = 0; e < triangle.edges.size(); ++e)
                if (triangle.edges[e].first == v || triangle.edges[e].second == v)
                    total += s3.cochain[e];
            CHECK(total == f[static_cast<std::size_t>(v)]);
        }
    }

    CHECK_THROWS_AS(FiniteGraph(3, {{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteGraph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(laplace_solve(segment, {Rat(0), Rat(1)}, {Rat(0), Rat(0)}), std::invalid_argument);
}

TEST_CASE("solver cross-checks the tree construction") {
    PrimeConfig p2(2);
    Ball b = ball(Vertex::standard(), 2, p2);
    Rng rng(99);
    std::vector<Int> f = random_vertex_function(rng, b.interior_count, 30);
    WeightFunction<int> parity = make_parity_weight<int>(b);
    std::vector<Int> h = laplace_preimage(b, parity, f);

    // complete f on the boundary with the values the cochain forces there
    // (boundary incidence is complete in the full graph of the ball)
    std::vector<std::pair<int, int>> edges;
    for (const Edge& e : b.edges) edges.emplace_back(e.u, e.v);
    FiniteGraph g(static_cast<int>(b.vertices.size()), edges);
    std::vector<Rat> w, f_full;
    for (std::size_t v = 0; v < b.vertices.size(); ++v) {
        w.emplace_back(parity_weight(b.vertices[v]));
        Int total(0);
        for (auto [to, e] : b.adjacency[v]) total += h[static_cast<std::size_t>(e)];
        f_full.emplace_back(Int(parity_weight(b.vertices[v]) * total));
    }
    for (int v = 0; v < b.interior_count; ++v) CHECK(f_full[static_cast<std::size_t>(v)] == Rat(f[static_cast<std::size_t>(v)]));

    LaplaceSolution sol = laplace_solve(g, w, f_full);
    REQUIRE(sol.feasible);
    // the two solutions may differ, but only by a harmonic cochain (checked
    // over Q since the solver is free to return non-integral values)
    std::vector<Rat> diff;
    for (std::size_t e = 0; e < b.edges.size(); ++e) diff.push_back(Rat(sol.cochain[e] - Rat(h[e])));
    CHECK(is_harmonic(b, diff));
}

TEST_CASE("generic coefficient modules") {
    PrimeConfig p2(2);
    Ball b = ball(Vertex::standard(), 3, p2);
    Rng rng(321);

    // Z^2 with the componentwise action of Z
    WeightFunction<int> parity = make_parity_weight<int>(b);
    std::vector<IntPair> f2;
    for (int v = 0; v < b.interior_count; ++v)
        f2.push_back(IntPair{Int(rand_range(rng, -99, 99)), Int(rand_range(rng, -99, 99))});
    std::vector<IntPair> h2 = laplace_preimage(b, parity, f2);
    std::vector<IntPair> lap2 = laplace(b, parity, h2);
    for (int v = 0; v < b.interior_count; ++v) CHECK(lap2[static_cast<std::size_t>(v)] == f2[static_cast<std::size_t>(v)]);

    // Z/7 with random unit weights
    using M7 = IntMod<7>;
    WeightFunction<M7> w7;
    for (std::size_t i = 0; i < b.vertices.size(); ++i) {
        M7 u(rand_range(rng, 1, 6));
        w7.push_back(make_unit(u, u.inverse()));
    }
    std::vector<M7> f7;
    for (int v = 0; v < b.interior_count; ++v) f7.push_back(M7(rand_range(rng, 0, 6)));
    std::vector<M7> h7 = laplace_preimage(b, w7, f7);
    std::vector<M7> lap7 = laplace(b, w7, h7);
    for (int v = 0; v < b.interior_count; ++v) CHECK(lap7[static_cast<std::size_t>(v)] == f7[static_cast<std::size_t>(v)]);
    CHECK(weight_factorization_check(b, w7, h7));
}
