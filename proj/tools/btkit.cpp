// Batch command-line surface over the library: exact Cartan decomposition,
// lattice/vertex canonicalization, tree balls with DOT/JSON export, the tree
// Laplacian with its preimage construction, and the finite-graph solver.
// Exit codes: 0 ok, 1 parse error, 2 domain error. Output is deterministic
// for a fixed invocation.

#include "btkit/btkit.hpp"
#include "btkit/random.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
using namespace btkit;

namespace {

std::string read_input(const std::string& path) {
    std::ostringstream buffer;
    if (path == "-") {
        buffer << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open input: " + path);
        buffer << in.rdbuf();
    }
    return buffer.str();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad JSON input: ") + e.what());
    }
}

Int parse_int(const std::string& s) {
    Rat q = parse_rat(s);
    if (q.get_den() != 1) throw std::invalid_argument("expected an integer: " + s);
    return q.get_num();
}

SquareMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a nonempty array of rows");
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != j.size())
            throw std::invalid_argument("matrix must be square, entries as strings");
        std::vector<std::string> cells;
        for (const auto& cell : row) {
            if (!cell.is_string()) throw std::invalid_argument("matrix entries must be strings");
            cells.push_back(cell.get<std::string>());
        }
        rows.push_back(std::move(cells));
    }
    return SquareMatrix::parse(rows);
}

ojson matrix_to_json(const SquareMatrix& m) {
    ojson rows = ojson::array();
    for (int i = 0; i < m.dim(); ++i) {
        ojson row = ojson::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(format_rat(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::array<Rat, 2>> generators_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("generators must be an array of 2-vectors");
    std::vector<std::array<Rat, 2>> gens;
    for (const auto& vec : j) {
        if (!vec.is_array() || vec.size() != 2 || !vec[0].is_string() || !vec[1].is_string())
            throw std::invalid_argument("each generator is a pair of scalar strings");
        gens.push_back({parse_rat(vec[0].get<std::string>()), parse_rat(vec[1].get<std::string>())});
    }
    return gens;
}

ojson triple_to_json(const CanonicalLattice& t) {
    return ojson::array({t.a, t.c, format_rat(t.b)});
}

Vertex vertex_from_json(const json& j, const PrimeConfig& cfg) {
    CanonicalLattice t = detail::triple_from_json(j);
    if (std::min(t.a, t.c) != 0) throw std::invalid_argument("vertex triple must have min(a, c) = 0");
    if (reduce_mod_uniformiser_power(t.b, t.c, cfg) != t.b)
        throw std::invalid_argument("vertex offset is not canonical");
    return Vertex{t};
}

WeightFunction<int> weight_for(const Ball& b, const std::string& kind, const std::string& file) {
    if (kind == "trivial") return make_trivial_weight<int>(b);
    if (kind == "parity") return make_parity_weight<int>(b);
    if (kind != "file") throw std::invalid_argument("unknown weight kind: " + kind);
    json j = parse_json(read_input(file));
    if (!j.is_array() || j.size() != b.vertices.size())
        throw std::invalid_argument("weight file must list one unit per ball vertex");
    WeightFunction<int> w;
    for (const auto& cell : j) {
        Int u = parse_int(cell.get<std::string>());
        if (u != 1 && u != -1) throw std::invalid_argument("integer weights must be 1 or -1");
        int s = u == 1 ? 1 : -1;
        w.push_back(Unit<int>{s, s});
    }
    return w;
}

void emit(const ojson& j) { std::cout << j.dump(2) << "\n"; }

int run_selftest(unsigned long seed) {
    Rng rng(seed);
    int failures = 0;
    auto report = [&](const std::string& name, bool pass) {
        std::cout << (pass ? "ok " : "FAIL ") << name << "\n";
        if (!pass) ++failures;
    };

    bool cartan_ok = true;
    for (unsigned long p : {2ul, 3ul}) {
        PrimeConfig cfg(p);
        for (int trial = 0; trial < 50 && cartan_ok; ++trial) {
            int n = 2 + static_cast<int>(rand_range(rng, 0, 1));
            SquareMatrix g = random_invertible(rng, n, 500);
            CartanFactorisation cf = cartan_decompose(g, cfg);
            cartan_ok = cf.k1.matrix() * g * cf.k2.matrix() == cf.diagonal(cfg) &&
                        is_unimodular(cf.k1.matrix(), cfg) && is_unimodular(cf.k2.matrix(), cfg) &&
                        cf.f == invariant_exponents(g, cfg);
        }
    }
    report("cartan roundtrip and oracle agreement", cartan_ok);

    PrimeConfig p2(2);
    bool canon_ok = true;
    for (int trial = 0; trial < 100 && canon_ok; ++trial) {
        LatticeRep l = random_lattice(rng);
        SquareMatrix u = random_unimodular(rng, 2, p2);
        canon_ok = canonicalize(LatticeRep(l.basis * u), p2) == canonicalize(l, p2);
    }
    report("canonical form is basis independent", canon_ok);

    Ball b = ball(Vertex::standard(), 3, p2);
    bool ball_ok = b.vertices.size() == 22 && b.edges.size() == 21 && check_tree(b);
    for (int v = 0; v < b.interior_count; ++v)
        ball_ok = ball_ok && b.adjacency[static_cast<std::size_t>(v)].size() == 3;
    report("ball structure at p=2, r=3", ball_ok);

    bool dist_ok = true;
    for (int trial = 0; trial < 50 && dist_ok; ++trial) {
        LatticeRep m = random_lattice(rng), l = random_lattice(rng);
        SquareMatrix g = random_invertible(rng, 2, 50);
        dist_ok = dist(act(g, m), act(g, l), p2) == dist(m, l, p2);
    }
    report("distance is action invariant", dist_ok);

    bool preimage_ok = true;
    WeightFunction<int> w = make_parity_weight<int>(b);
    for (int trial = 0; trial < 5 && preimage_ok; ++trial) {
        std::vector<Int> f;
        for (int v = 0; v < b.interior_count; ++v) f.emplace_back(rand_range(rng, -99, 99));
        std::vector<Int> h = laplace_preimage(b, w, f);
        std::vector<Int> lap = laplace(b, w, h);
        for (int v = 0; v < b.interior_count; ++v)
            preimage_ok = preimage_ok && lap[static_cast<std::size_t>(v)] == f[static_cast<std::size_t>(v)];
    }
    report("laplacian preimage is exact", preimage_ok);

    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Cartan decomposition, Bruhat-Tits tree and tree Laplacian toolkit"};
    app.require_subcommand(1);

    unsigned long p_value = 2;
    int radius = 1;
    std::string input = "-";
    std::string format = "json";
    std::string weight = "trivial";
    std::string weight_file;
    unsigned long seed = 1;

    std::function<void()> action;

    auto* cartan = app.add_subcommand("cartan", "Cartan decomposition of an invertible matrix");
    cartan->add_option("--p", p_value, "prime uniformiser")->required();
    cartan->add_option("--input", input, "JSON matrix (row-major string entries), file path or - for stdin");
    cartan->callback([&] {
        action = [&] {
            PrimeConfig cfg(p_value);
            SquareMatrix g = matrix_from_json(parse_json(read_input(input)));
            CartanFactorisation cf = cartan_decompose(g, cfg);
            ojson out;
            out["p"] = std::to_string(p_value);
            out["n"] = g.dim();
            out["f"] = cf.f;
            out["k1"] = matrix_to_json(cf.k1.matrix());
            out["k2"] = matrix_to_json(cf.k2.matrix());
            out["oracle"] = invariant_exponents(g, cfg);
            emit(out);
        };
    });

    auto* vertex = app.add_subcommand("vertex", "canonical lattice and vertex of a generator list");
    vertex->add_option("--p", p_value, "prime uniformiser")->required();
    vertex->add_option("--input", input, "JSON list of generator 2-vectors");
    vertex->callback([&] {
        action = [&] {
            PrimeConfig cfg(p_value);
            auto gens = generators_from_json(parse_json(read_input(input)));
            if (!is_lattice(gens)) throw std::domain_error("generators do not span K^2");
            LatticeRep l = lattice_from_generators(gens, cfg);
            ojson out;
            out["lattice"] = triple_to_json(canonicalize(l, cfg));
            out["vertex"] = triple_to_json(vertex_of(l, cfg).rep);
            emit(out);
        };
    });

    auto* dist_cmd = app.add_subcommand("dist", "distance between two lattices");
    dist_cmd->add_option("--p", p_value, "prime uniformiser")->required();
    dist_cmd->add_option("--input", input, "JSON object {\"a\": generators, \"b\": generators}");
    dist_cmd->callback([&] {
        action = [&] {
            PrimeConfig cfg(p_value);
            json j = parse_json(read_input(input));
            if (!j.is_object() || !j.contains("a") || !j.contains("b"))
                throw std::invalid_argument("expected {\"a\": ..., \"b\": ...}");
            LatticeRep a = lattice_from_generators(generators_from_json(j["a"]), cfg);
            LatticeRep b = lattice_from_generators(generators_from_json(j["b"]), cfg);
            ojson out;
            out["dist"] = dist(a, b, cfg);
            emit(out);
        };
    });

    auto* nbrs = app.add_subcommand("neighbours", "the p+1 neighbours of a vertex");
    nbrs->add_option("--p", p_value, "prime uniformiser")->required();
    nbrs->add_option("--input", input, "JSON vertex triple [a, c, \"b\"]");
    nbrs->callback([&] {
        action = [&] {
            PrimeConfig cfg(p_value);
            Vertex v = vertex_from_json(parse_json(read_input(input)), cfg);
            ojson list = ojson::array();
            for (const Vertex& w : neighbours(v, cfg)) list.push_back(triple_to_json(w.rep));
            ojson out;
            out["neighbours"] = std::move(list);
            emit(out);
        };
    });

    auto* ball_cmd = app.add_subcommand("ball", "BFS ball around the standard vertex");
    ball_cmd->add_option("--p", p_value, "prime uniformiser")->required();
    ball_cmd->add_option("--radius", radius, "ball radius")->required();
    ball_cmd->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));
    ball_cmd->callback([&] {
        action = [&] {
            PrimeConfig cfg(p_value);
            Ball b = ball(Vertex::standard(), radius, cfg);
            if (format == "dot")
                std::cout << export_dot(b);
            else
                std::cout << export_json(b);
        };
    });

    auto* laplace_cmd = app.add_subcommand("laplace", "weighted Laplacian of a cochain on a ball");
    laplace_cmd->add_option("--p", p_value, "prime uniformiser")->required();
    laplace_cmd->add_option("--radius", radius, "ball radius")->required();
    laplace_cmd->add_option("--weight", weight, "trivial, parity or file")
        ->check(CLI::IsMember({"trivial", "parity", "file"}));
    laplace_cmd->add_option("--weight-file", weight_file, "JSON array of units, one per vertex");
    laplace_cmd->add_option("--input", input, "JSON {\"cochain\": [integer strings, edge order]}");
    laplace_cmd->callback([&] {
        action = [&] {
            PrimeConfig cfg(p_value);
            Ball b = ball(Vertex::standard(), radius, cfg);
            json j = parse_json(read_input(input));
            if (!j.is_object() || !j.contains("cochain") || !j["cochain"].is_array() ||
                j["cochain"].size() != b.edges.size())
                throw std::invalid_argument("expected {\"cochain\": [one value per edge]}");
            std::vector<Int> h;
            for (const auto& cell : j["cochain"]) h.push_back(parse_int(cell.get<std::string>()));
            WeightFunction<int> w = weight_for(b, weight, weight_file);
            std::vector<Int> values = laplace(b, w, h);
            ojson out;
            out["interior_count"] = b.interior_count;
            ojson list = ojson::array();
            for (const Int& value : values) list.push_back(value.get_str());
            out["values"] = std::move(list);
            emit(out);
        };
    });

    auto* preimage_cmd = app.add_subcommand("preimage", "cochain with prescribed Laplacian on a ball");
    preimage_cmd->add_option("--p", p_value, "prime uniformiser")->required();
    preimage_cmd->add_option("--radius", radius, "ball radius")->required();
    preimage_cmd->add_option("--weight", weight, "trivial, parity or file")
        ->check(CLI::IsMember({"trivial", "parity", "file"}));
    preimage_cmd->add_option("--weight-file", weight_file, "JSON array of units, one per vertex");
    preimage_cmd->add_option("--input", input, "JSON {\"f\": [integer strings, interior vertex order]}");
    preimage_cmd->callback([&] {
        action = [&] {
            PrimeConfig cfg(p_value);
            Ball b = ball(Vertex::standard(), radius, cfg);
            json j = parse_json(read_input(input));
            if (!j.is_object() || !j.contains("f") || !j["f"].is_array() ||
                j["f"].size() != static_cast<std::size_t>(b.interior_count))
                throw std::invalid_argument("expected {\"f\": [one value per interior vertex]}");
            std::vector<Int> f;
            for (const auto& cell : j["f"]) f.push_back(parse_int(cell.get<std::string>()));
            WeightFunction<int> w = weight_for(b, weight, weight_file);
            std::vector<Int> h = laplace_preimage(b, w, f);
            ojson out;
            ojson list = ojson::array();
            for (const Int& value : h) list.push_back(value.get_str());
            out["cochain"] = std::move(list);
            emit(out);
        };
    });

    auto* solve = app.add_subcommand("solve", "exact Laplacian solve on a finite graph");
    solve->add_option("--input", input,
                      "JSON {\"n\": count, \"edges\": [[i,j]...], \"f\": [...], \"w\": [...] (optional)}");
    solve->callback([&] {
        action = [&] {
            json j = parse_json(read_input(input));
            if (!j.is_object() || !j.contains("n") || !j.contains("edges") || !j.contains("f"))
                throw std::invalid_argument("expected {\"n\", \"edges\", \"f\"}");
            int n = j["n"].get<int>();
            std::vector<std::pair<int, int>> edges;
            for (const auto& e : j["edges"]) {
                if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edges are [i, j] pairs");
                edges.emplace_back(e[0].get<int>(), e[1].get<int>());
            }
            FiniteGraph g(n, edges);
            std::vector<Rat> f;
            for (const auto& cell : j["f"]) f.push_back(parse_rat(cell.get<std::string>()));
            std::vector<Rat> w(static_cast<std::size_t>(n), Rat(1));
            if (j.contains("w")) {
                w.clear();
                for (const auto& cell : j["w"]) w.push_back(parse_rat(cell.get<std::string>()));
            }
            LaplaceSolution sol = laplace_solve(g, w, f);
            ojson out;
            out["feasible"] = sol.feasible;
            if (sol.feasible) {
                ojson list = ojson::array();
                for (const Rat& x : sol.cochain) list.push_back(format_rat(x));
                out["cochain"] = std::move(list);
            } else {
                ojson list = ojson::array();
                for (const Rat& x : sol.certificate) list.push_back(format_rat(x));
                out["certificate"] = std::move(list);
            }
            emit(out);
        };
    });

    auto* selftest = app.add_subcommand("selftest", "randomized property checks (seed via BTKIT_SEED)");
    selftest->add_option("--seed", seed, "RNG seed, overrides BTKIT_SEED");
    bool seed_given = false;
    selftest->callback([&] {
        seed_given = selftest->count("--seed") > 0;
        action = [&, seed_given] {
            unsigned long s = seed;
            if (!seed_given) {
                if (const char* env = std::getenv("BTKIT_SEED")) s = std::strtoul(env, nullptr, 10);
            }
            int code = run_selftest(s);
            if (code != 0) throw std::domain_error("selftest failed");
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        action();
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
