#pragma once

// The Bruhat-Tits tree of GL_2 over K, materialised as finite BFS balls:
// neighbour enumeration through the lines of the residue plane, tree checks,
// graph distance, action witnesses, the standard-vertex stabilizer predicate,
// and deterministic DOT / JSON exports.

#include "btkit/lattice.hpp"
#include "btkit/matrix.hpp"
#include "btkit/valued.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace btkit {

/// Unordered edge between ball vertices, stored as index pair with the
/// endpoints ordered by the total order on canonical triples.
struct Edge {
    int u = 0;
    int v = 0;

    friend bool operator==(const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }
};

/// Finite truncation of the tree: all vertices within `radius` of `root`,
/// together with every tree edge between them. Vertices are listed in BFS
/// discovery order (children sorted by canonical triple), so the interior
/// vertices (distance < radius) form the prefix [0, interior_count).
/// A completed ball is immutable and safe for concurrent reads.
struct Ball {
    PrimeConfig cfg;
    Vertex root;
    int radius = 0;
    std::vector<Vertex> vertices;
    std::vector<int> dist_to_root;
    std::vector<Edge> edges;
    std::vector<std::vector<std::pair<int, int>>> adjacency; ///< per vertex: (neighbour, edge index)
    int interior_count = 0;
    std::map<Vertex, int> index;

    bool is_interior(int v) const { return dist_to_root[static_cast<std::size_t>(v)] < radius; }

    int find(const Vertex& v) const {
        auto it = index.find(v);
        return it == index.end() ? -1 : it->second;
    }
};

inline bool is_neighbour(const Vertex& v, const Vertex& w, const PrimeConfig& cfg) {
    return vertex_dist(v, w, cfg) == 1;
}

/// The p + 1 lattices M with pL ⊊ M ⊊ L, one per line of the residue plane
/// L/pL: with basis columns (e, f), the lines lift to span{e + t f, p f} for
/// t = 0..p-1 and span{f, p e}.
inline std::vector<CanonicalLattice> standard_neighbours(const CanonicalLattice& l, const PrimeConfig& cfg) {
    Rat pa = cfg.uniformiser_pow(l.a);
    Rat pc = cfg.uniformiser_pow(l.c);
    std::vector<CanonicalLattice> out;
    out.reserve(static_cast<std::size_t>(cfg.p()) + 1);
    for (unsigned long t = 0; t < cfg.p(); ++t) {
        SquareMatrix m(2);
        m.at(0, 0) = pa;
        m.at(1, 0) = l.b + Rat(t) * pc;
        m.at(1, 1) = Rat(pc * cfg.uniformiser());
        out.push_back(canonicalize(LatticeRep(m), cfg));
    }
    SquareMatrix m(2);
    m.at(0, 1) = Rat(pa * cfg.uniformiser());
    m.at(1, 0) = pc;
    m.at(1, 1) = Rat(l.b * cfg.uniformiser());
    out.push_back(canonicalize(LatticeRep(m), cfg));
    return out;
}

/// The p + 1 neighbouring vertices, pairwise distinct, each at distance 1;
/// independent of the chosen representative.
inline std::vector<Vertex> neighbours(const Vertex& v, const PrimeConfig& cfg) {
    std::vector<Vertex> out;
    for (const CanonicalLattice& m : standard_neighbours(v.rep, cfg)) out.push_back(vertex_of(m, cfg));
    return out;
}

inline Ball ball(const Vertex& root, int radius, const PrimeConfig& cfg) {
    if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
    Ball b{cfg, root, radius, {}, {}, {}, {}, 0, {}};
    b.vertices.push_back(root);
    b.dist_to_root.push_back(0);
    b.adjacency.emplace_back();
    b.index[root] = 0;
    std::set<std::pair<int, int>> seen;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int at = queue.front();
        queue.pop_front();
        if (b.dist_to_root[static_cast<std::size_t>(at)] == radius) continue;
        std::vector<Vertex> next = neighbours(b.vertices[static_cast<std::size_t>(at)], cfg);
        std::sort(next.begin(), next.end());
        for (const Vertex& w : next) {
            int to = b.find(w);
            if (to < 0) {
                to = static_cast<int>(b.vertices.size());
                b.vertices.push_back(w);
                b.dist_to_root.push_back(b.dist_to_root[static_cast<std::size_t>(at)] + 1);
                b.adjacency.emplace_back();
                b.index[w] = to;
                queue.push_back(to);
            }
            auto key = std::minmax(at, to);
            if (seen.insert(key).second) {
                int e = static_cast<int>(b.edges.size());
                Edge edge = b.vertices[static_cast<std::size_t>(at)] < b.vertices[static_cast<std::size_t>(to)]
                                ? Edge{at, to}
                                : Edge{to, at};
                b.edges.push_back(edge);
                b.adjacency[static_cast<std::size_t>(at)].emplace_back(to, e);
                b.adjacency[static_cast<std::size_t>(to)].emplace_back(at, e);
            }
        }
    }
    for (int d : b.dist_to_root)
        if (d < radius) ++b.interior_count;
    return b;
}

/// Connected with |E| = |V| - 1 (acyclic given connectedness).
inline bool check_tree(const Ball& b) {
    if (b.edges.size() != b.vertices.size() - 1) return false;
    std::vector<char> visited(b.vertices.size(), 0);
    std::deque<int> queue{0};
    visited[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
        int at = queue.front();
        queue.pop_front();
        for (auto [to, e] : b.adjacency[static_cast<std::size_t>(at)]) {
            if (visited[static_cast<std::size_t>(to)]) continue;
            visited[static_cast<std::size_t>(to)] = 1;
            ++reached;
            queue.push_back(to);
        }
    }
    return reached == b.vertices.size();
}

/// BFS shortest-path length inside the ball.
inline int graph_dist(const Ball& b, const Vertex& v, const Vertex& w) {
    int from = b.find(v), to = b.find(w);
    if (from < 0 || to < 0) throw std::invalid_argument("vertex not in ball");
    if (from == to) return 0;
    std::vector<int> dist(b.vertices.size(), -1);
    dist[static_cast<std::size_t>(from)] = 0;
    std::deque<int> queue{from};
    while (!queue.empty()) {
        int at = queue.front();
        queue.pop_front();
        for (auto [next, e] : b.adjacency[static_cast<std::size_t>(at)]) {
            if (dist[static_cast<std::size_t>(next)] >= 0) continue;
            dist[static_cast<std::size_t>(next)] = dist[static_cast<std::size_t>(at)] + 1;
            if (next == to) return dist[static_cast<std::size_t>(next)];
            queue.push_back(next);
        }
    }
    throw std::invalid_argument("vertex not reachable within ball");
}

/// g with act_vertex(g, v0) = v: any basis matrix of the canonical
/// representative works.
inline InvertibleMatrix transitive_witness(const Vertex& v, const PrimeConfig& cfg) {
    return InvertibleMatrix(v.rep.basis_matrix(cfg));
}

/// g ∈ K^x GL_2(R), the stabilizer of the standard vertex: after scaling out
/// p^m with m the minimal entry valuation, the matrix must be unimodular.
inline bool stabilizes_standard(const SquareMatrix& g, const PrimeConfig& cfg) {
    if (g.det() == 0) throw std::domain_error("not invertible");
    long m = min_valuation(g, cfg).value();
    return is_unimodular(cfg.uniformiser_pow(-m) * g, cfg);
}

inline std::string export_dot(const Ball& b) {
    std::ostringstream out;
    out << "graph bruhat_tits_ball {\n";
    out << "  node [shape=circle];\n";
    for (std::size_t i = 0; i < b.vertices.size(); ++i) {
        out << "  " << i << " [label=\"" << format_triple(b.vertices[i].rep) << "\", parity="
            << (is_even(b.vertices[i]) ? 0 : 1) << "];\n";
    }
    for (const Edge& e : b.edges) out << "  " << e.u << " -- " << e.v << ";\n";
    out << "}\n";
    return out.str();
}

namespace detail {

inline nlohmann::ordered_json triple_json(const CanonicalLattice& t) {
    return nlohmann::ordered_json::array({t.a, t.c, format_rat(t.b)});
}

inline CanonicalLattice triple_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number_integer() || !j[1].is_number_integer() ||
        !j[2].is_string())
        throw std::invalid_argument("vertex triple must be [a, c, \"b\"]");
    CanonicalLattice t;
    t.a = j[0].get<long>();
    t.c = j[1].get<long>();
    t.b = parse_rat(j[2].get<std::string>());
    return t;
}

} // namespace detail

inline std::string export_json(const Ball& b) {
    nlohmann::ordered_json j;
    j["p"] = std::to_string(b.cfg.p());
    j["root"] = detail::triple_json(b.root.rep);
    j["radius"] = b.radius;
    auto vertices = nlohmann::ordered_json::array();
    auto parity = nlohmann::ordered_json::array();
    for (const Vertex& v : b.vertices) {
        vertices.push_back(detail::triple_json(v.rep));
        parity.push_back(is_even(v) ? 0 : 1);
    }
    j["vertices"] = std::move(vertices);
    auto edges = nlohmann::ordered_json::array();
    for (const Edge& e : b.edges) edges.push_back(nlohmann::ordered_json::array({e.u, e.v}));
    j["edges"] = std::move(edges);
    j["parity"] = std::move(parity);
    return j.dump(2) + "\n";
}

/// Inverse of export_json. Validates the structural invariants (canonical
/// triples, parity, simple edges, connectedness, BFS distances vs radius) and
/// rebuilds the derived fields.
inline Ball parse_ball_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad ball JSON: ") + e.what());
    }
    auto fail = [](const std::string& what) { throw std::invalid_argument("bad ball JSON: " + what); };
    if (!j.is_object() || !j.contains("p") || !j.contains("root") || !j.contains("radius") ||
        !j.contains("vertices") || !j.contains("edges") || !j.contains("parity"))
        fail("missing field");
    if (!j["p"].is_string() || !j["radius"].is_number_integer()) fail("p/radius types");
    PrimeConfig cfg(std::stoul(j["p"].get<std::string>()));
    Ball b{cfg, Vertex{detail::triple_from_json(j["root"])}, j["radius"].get<int>(), {}, {}, {}, {}, 0, {}};
    if (b.radius < 0) fail("negative radius");
    for (const auto& vj : j["vertices"]) {
        CanonicalLattice t = detail::triple_from_json(vj);
        if (std::min(t.a, t.c) != 0) fail("vertex not homothety-normalized");
        if (reduce_mod_uniformiser_power(t.b, t.c, cfg) != t.b) fail("vertex offset not canonical");
        Vertex v{t};
        if (b.index.count(v)) fail("duplicate vertex");
        b.index[v] = static_cast<int>(b.vertices.size());
        b.vertices.push_back(v);
    }
    if (b.vertices.empty() || !(b.vertices[0] == b.root)) fail("root must be the first vertex");
    int n = static_cast<int>(b.vertices.size());
    b.adjacency.assign(static_cast<std::size_t>(n), {});
    std::set<std::pair<int, int>> seen;
    for (const auto& ej : j["edges"]) {
        if (!ej.is_array() || ej.size() != 2) fail("edge shape");
        int u = ej[0].get<int>(), v = ej[1].get<int>();
        if (u < 0 || v < 0 || u >= n || v >= n || u == v) fail("edge endpoints");
        if (!seen.insert(std::minmax(u, v)).second) fail("duplicate edge");
        Edge e = b.vertices[static_cast<std::size_t>(u)] < b.vertices[static_cast<std::size_t>(v)]
                     ? Edge{u, v}
                     : Edge{v, u};
        int idx = static_cast<int>(b.edges.size());
        b.edges.push_back(e);
        b.adjacency[static_cast<std::size_t>(u)].emplace_back(v, idx);
        b.adjacency[static_cast<std::size_t>(v)].emplace_back(u, idx);
    }
    b.dist_to_root.assign(static_cast<std::size_t>(n), -1);
    b.dist_to_root[0] = 0;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        int at = queue.front();
        queue.pop_front();
        for (auto [to, e] : b.adjacency[static_cast<std::size_t>(at)])
            if (b.dist_to_root[static_cast<std::size_t>(to)] < 0) {
                b.dist_to_root[static_cast<std::size_t>(to)] = b.dist_to_root[static_cast<std::size_t>(at)] + 1;
                queue.push_back(to);
            }
    }
    int max_dist = 0;
    for (std::size_t i = 0; i < b.vertices.size(); ++i) {
        if (b.dist_to_root[i] < 0) fail("disconnected ball");
        max_dist = std::max(max_dist, b.dist_to_root[i]);
        int want = is_even(b.vertices[i]) ? 0 : 1;
        if (j["parity"].size() != b.vertices.size() || j["parity"][i].get<int>() != want) fail("parity");
    }
    if (n > 1 && max_dist != b.radius) fail("radius does not match the vertex set");
    for (int d : b.dist_to_root)
        if (d < b.radius) ++b.interior_count;
    return b;
}

} // namespace btkit
