#pragma once

// Weighted graph Laplacian on tree balls and on arbitrary finite graphs.
// The Laplacian of weight w sends an edge function h to the vertex function
// v -> w(v) * sum of h over the edges at v; harmonic cochains are the kernel
// for the parity weight. The preimage construction realises surjectivity on
// rooted balls level by level; the finite-graph solver decides feasibility
// exactly and produces an infeasibility certificate otherwise.

#include "btkit/lattice.hpp"
#include "btkit/tree.hpp"
#include "btkit/valued.hpp"

#include <algorithm>
#include <concepts>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace btkit {

/// Abelian-group interface for cochain values; the ring of weights acts on
/// it through operator*.
template <class M>
concept CoefficientModule = std::regular<M> && requires(M a, M b) {
    { a + b } -> std::convertible_to<M>;
    { a - b } -> std::convertible_to<M>;
};

template <class R, class M>
concept ActsOn = requires(R r, M m) {
    { r * m } -> std::convertible_to<M>;
};

/// An invertible ring element carried together with its inverse.
template <class R>
struct Unit {
    R value;
    R inverse;
};

template <class R>
Unit<R> make_unit(R value, R inverse) {
    if (!(value * inverse == R{1})) throw std::invalid_argument("not a unit");
    return Unit<R>{std::move(value), std::move(inverse)};
}

/// Weight function on a ball: one unit per vertex, indexed by ball order.
template <class R>
using WeightFunction = std::vector<Unit<R>>;

/// +1 on even vertices, -1 on odd ones.
inline int parity_weight(const Vertex& v) { return is_even(v) ? 1 : -1; }

template <class R>
WeightFunction<R> make_trivial_weight(const Ball& b) {
    return WeightFunction<R>(b.vertices.size(), Unit<R>{R{1}, R{1}});
}

template <class R>
WeightFunction<R> make_parity_weight(const Ball& b) {
    WeightFunction<R> w;
    w.reserve(b.vertices.size());
    for (const Vertex& v : b.vertices) {
        R s{parity_weight(v)};
        w.push_back(Unit<R>{s, s});
    }
    return w;
}

/// Root-relative edge orientation on a tree ball: s(e) is the endpoint
/// closer to the root, t(e) the farther one; o_v is the unique inbound edge
/// of a non-root vertex and Out_v the outward edge cone.
struct OrientedEdgeInfo {
    std::vector<int> source, target;          ///< per edge
    std::vector<int> inbound_edge;            ///< per vertex; -1 at the root
    std::vector<std::vector<int>> outward;    ///< per vertex, edge indices
};

inline OrientedEdgeInfo orient(const Ball& b) {
    if (!check_tree(b)) throw std::invalid_argument("ball is not a tree");
    OrientedEdgeInfo info;
    info.source.resize(b.edges.size());
    info.target.resize(b.edges.size());
    info.inbound_edge.assign(b.vertices.size(), -1);
    info.outward.assign(b.vertices.size(), {});
    for (std::size_t e = 0; e < b.edges.size(); ++e) {
        int u = b.edges[e].u, v = b.edges[e].v;
        int du = b.dist_to_root[static_cast<std::size_t>(u)];
        int dv = b.dist_to_root[static_cast<std::size_t>(v)];
        if (du == dv) throw std::invalid_argument("edge between equidistant vertices");
        int s = du < dv ? u : v;
        int t = du < dv ? v : u;
        info.source[e] = s;
        info.target[e] = t;
        if (info.inbound_edge[static_cast<std::size_t>(t)] != -1)
            throw std::invalid_argument("vertex with two inbound edges");
        info.inbound_edge[static_cast<std::size_t>(t)] = static_cast<int>(e);
        info.outward[static_cast<std::size_t>(s)].push_back(static_cast<int>(e));
    }
    return info;
}

/// The fixed distinguished edge d_v: the outward edge whose target has the
/// lexicographically smallest canonical triple. Stable across runs.
inline int distinguished_edge(const Ball& b, const OrientedEdgeInfo& info, int v) {
    const std::vector<int>& cone = info.outward[static_cast<std::size_t>(v)];
    if (cone.empty()) throw std::domain_error("leaf has no outward edge");
    int best = cone[0];
    for (int e : cone)
        if (b.vertices[static_cast<std::size_t>(info.target[static_cast<std::size_t>(e)])] <
            b.vertices[static_cast<std::size_t>(info.target[static_cast<std::size_t>(best)])])
            best = e;
    return best;
}

/// w(v) * sum of h over the edges at v. Defined at interior vertices only,
/// where the incident edge set of the ball is complete.
template <class R, CoefficientModule M>
    requires ActsOn<R, M>
M laplace_at(const Ball& b, const WeightFunction<R>& w, const std::vector<M>& h, int v) {
    if (h.size() != b.edges.size()) throw std::invalid_argument("cochain size mismatch");
    if (w.size() != b.vertices.size()) throw std::invalid_argument("weight size mismatch");
    if (v < 0 || v >= static_cast<int>(b.vertices.size()) || !b.is_interior(v))
        throw std::domain_error("incomplete incidence");
    M sum{};
    for (auto [to, e] : b.adjacency[static_cast<std::size_t>(v)]) sum = sum + h[static_cast<std::size_t>(e)];
    return M(w[static_cast<std::size_t>(v)].value * sum);
}

/// Laplacian values on every interior vertex, in ball order.
template <class R, CoefficientModule M>
    requires ActsOn<R, M>
std::vector<M> laplace(const Ball& b, const WeightFunction<R>& w, const std::vector<M>& h) {
    std::vector<M> out;
    out.reserve(static_cast<std::size_t>(b.interior_count));
    for (int v = 0; v < b.interior_count; ++v) out.push_back(laplace_at(b, w, h, v));
    return out;
}

/// Kernel of the parity-weighted Laplacian on the interior.
template <CoefficientModule M>
bool is_harmonic(const Ball& b, const std::vector<M>& h) {
    WeightFunction<int> w = make_parity_weight<int>(b);
    for (int v = 0; v < b.interior_count; ++v)
        if (!(laplace_at(b, w, h, v) == M{})) return false;
    return true;
}

/// Preimage construction with an explicit distinguished-edge choice
/// (one outward edge per interior vertex). Levels are filled root-outward:
/// every outward edge of v gets 0 except d_v, which absorbs
/// w(v)^{-1} f(v) - h(o_v).
template <class R, CoefficientModule M>
    requires ActsOn<R, M>
std::vector<M> laplace_preimage_with(const Ball& b, const OrientedEdgeInfo& info,
                                     const std::vector<int>& distinguished,
                                     const WeightFunction<R>& w, const std::vector<M>& f) {
    if (b.radius < 1) throw std::domain_error("radius must be positive");
    if (w.size() != b.vertices.size()) throw std::invalid_argument("weight size mismatch");
    if (f.size() != static_cast<std::size_t>(b.interior_count))
        throw std::invalid_argument("vertex function must cover the interior");
    if (distinguished.size() != static_cast<std::size_t>(b.interior_count))
        throw std::invalid_argument("distinguished choice must cover the interior");
    std::vector<M> h(b.edges.size(), M{});
    for (int v = 0; v < b.interior_count; ++v) {
        M value(w[static_cast<std::size_t>(v)].inverse * f[static_cast<std::size_t>(v)]);
        int inbound = info.inbound_edge[static_cast<std::size_t>(v)];
        if (inbound >= 0) value = value - h[static_cast<std::size_t>(inbound)];
        int d = distinguished[static_cast<std::size_t>(v)];
        h[static_cast<std::size_t>(d)] = value;
    }
#ifndef NDEBUG
    for (int v = 0; v < b.interior_count; ++v)
        assert(laplace_at(b, w, h, v) == f[static_cast<std::size_t>(v)]);
#endif
    return h;
}

/// Preimage of f under the Laplacian of weight w: h with
/// laplace(b, w, h) = f on every vertex at distance <= radius - 1.
template <class R, CoefficientModule M>
    requires ActsOn<R, M>
std::vector<M> laplace_preimage(const Ball& b, const WeightFunction<R>& w, const std::vector<M>& f) {
    OrientedEdgeInfo info = orient(b);
    std::vector<int> d(static_cast<std::size_t>(b.interior_count));
    for (int v = 0; v < b.interior_count; ++v)
        d[static_cast<std::size_t>(v)] = distinguished_edge(b, info, v);
    return laplace_preimage_with(b, info, d, w, f);
}

/// Self-test identity: laplace for weight w equals w(v) times the trivially
/// weighted laplace, pointwise on the interior.
template <class R, CoefficientModule M>
    requires ActsOn<R, M>
bool weight_factorization_check(const Ball& b, const WeightFunction<R>& w, const std::vector<M>& h) {
    WeightFunction<R> trivial = make_trivial_weight<R>(b);
    for (int v = 0; v < b.interior_count; ++v) {
        M weighted = laplace_at(b, w, h, v);
        M plain = laplace_at(b, trivial, h, v);
        if (!(weighted == M(w[static_cast<std::size_t>(v)].value * plain))) return false;
    }
    return true;
}

/// Simple undirected finite graph (no loops, no duplicate edges) for the
/// exact feasibility analysis of the weighted Laplacian.
struct FiniteGraph {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;

    FiniteGraph(int n, std::vector<std::pair<int, int>> e) : vertex_count(n), edges(std::move(e)) {
        if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
        std::set<std::pair<int, int>> seen;
        for (auto& [u, v] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
            if (u == v) throw std::invalid_argument("loops are not allowed");
            if (!seen.insert(std::minmax(u, v)).second) throw std::invalid_argument("duplicate edge");
        }
    }
};

/// Result of the exact solve of Delta_w(h) = f over the edge unknowns.
/// When infeasible, `certificate` is a vector y over the vertices with
/// y^T A = 0 for the incidence system but y^T f != 0 (an inconsistent
/// reduced row of the elimination).
struct LaplaceSolution {
    bool feasible = false;
    std::vector<Rat> cochain;
    std::vector<Rat> certificate;
};

inline LaplaceSolution laplace_solve(const FiniteGraph& g, const std::vector<Rat>& weights,
                                     const std::vector<Rat>& f) {
    int n = g.vertex_count;
    int m = static_cast<int>(g.edges.size());
    if (static_cast<int>(weights.size()) != n || static_cast<int>(f.size()) != n)
        throw std::invalid_argument("weights and f must have one entry per vertex");
    for (const Rat& w : weights)
        if (w == 0) throw std::invalid_argument("weights must be units");

    std::vector<std::vector<Rat>> a(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(m), Rat(0)));
    std::vector<std::vector<Rat>> track(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(n), Rat(0)));
    std::vector<Rat> rhs(f);
    for (int v = 0; v < n; ++v) track[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)] = 1;
    for (int e = 0; e < m; ++e) {
        auto [u, v] = g.edges[static_cast<std::size_t>(e)];
        a[static_cast<std::size_t>(u)][static_cast<std::size_t>(e)] = weights[static_cast<std::size_t>(u)];
        a[static_cast<std::size_t>(v)][static_cast<std::size_t>(e)] = weights[static_cast<std::size_t>(v)];
    }

    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < m && rank < n; ++col) {
        int pivot = -1;
        for (int row = rank; row < n; ++row)
            if (a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] != 0) {
                pivot = row;
                break;
            }
        if (pivot < 0) continue;
        std::swap(a[static_cast<std::size_t>(pivot)], a[static_cast<std::size_t>(rank)]);
        std::swap(track[static_cast<std::size_t>(pivot)], track[static_cast<std::size_t>(rank)]);
        std::swap(rhs[static_cast<std::size_t>(pivot)], rhs[static_cast<std::size_t>(rank)]);
        for (int row = 0; row < n; ++row) {
            if (row == rank || a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] == 0) continue;
            Rat c(-a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] /
                  a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)]);
            for (int k = col; k < m; ++k)
                a[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] +=
                    c * a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(k)];
            for (int k = 0; k < n; ++k)
                track[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] +=
                    c * track[static_cast<std::size_t>(rank)][static_cast<std::size_t>(k)];
            rhs[static_cast<std::size_t>(row)] += c * rhs[static_cast<std::size_t>(rank)];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (int row = rank; row < n; ++row) {
        if (rhs[static_cast<std::size_t>(row)] != 0) {
            LaplaceSolution bad;
            bad.feasible = false;
            bad.certificate = track[static_cast<std::size_t>(row)];
            return bad;
        }
    }
    LaplaceSolution ok;
    ok.feasible = true;
    ok.cochain.assign(static_cast<std::size_t>(m), Rat(0));
    for (int r = 0; r < rank; ++r) {
        int col = pivot_col[static_cast<std::size_t>(r)];
        // Free columns right of the pivot contribute 0 (free unknowns are 0).
        ok.cochain[static_cast<std::size_t>(col)] =
            Rat(rhs[static_cast<std::size_t>(r)] / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]);
    }
    return ok;
}

// Coefficient module instances used alongside the default mpz_class
// integers: Z^2 with the componentwise action, and Z/N with unit weights.

struct IntPair {
    Int x = 0;
    Int y = 0;

    friend IntPair operator+(const IntPair& a, const IntPair& b) { return {Int(a.x + b.x), Int(a.y + b.y)}; }
    friend IntPair operator-(const IntPair& a, const IntPair& b) { return {Int(a.x - b.x), Int(a.y - b.y)}; }
    friend bool operator==(const IntPair& a, const IntPair& b) { return a.x == b.x && a.y == b.y; }
    friend IntPair operator*(int s, const IntPair& a) { return {Int(s * a.x), Int(s * a.y)}; }
    friend IntPair operator*(const Int& s, const IntPair& a) { return {Int(s * a.x), Int(s * a.y)}; }
};

template <unsigned long N>
struct IntMod {
    unsigned long v = 0;

    IntMod() = default;
    IntMod(long x) : v(static_cast<unsigned long>(((x % static_cast<long>(N)) + static_cast<long>(N)) % static_cast<long>(N))) {}

    friend IntMod operator+(IntMod a, IntMod b) { return IntMod(static_cast<long>((a.v + b.v) % N)); }
    friend IntMod operator-(IntMod a, IntMod b) { return IntMod(static_cast<long>((a.v + N - b.v) % N)); }
    friend IntMod operator*(IntMod a, IntMod b) { return IntMod(static_cast<long>((a.v * b.v) % N)); }
    friend IntMod operator*(int s, IntMod a) { return IntMod(s) * a; }
    friend bool operator==(IntMod a, IntMod b) { return a.v == b.v; }

    IntMod inverse() const {
        long t = 0, new_t = 1;
        long r = static_cast<long>(N), new_r = static_cast<long>(v);
        while (new_r != 0) {
            long q = r / new_r;
            t = std::exchange(new_t, t - q * new_t);
            r = std::exchange(new_r, r - q * new_r);
        }
        if (r != 1) throw std::domain_error("not a unit");
        return IntMod(t);
    }
};

} // namespace btkit
