#include <doctest.h>

#include <cmath>
#include <random>

#include "inp2cpa/error.hpp"
#include "inp2cpa/resilience.hpp"
#include "oracle/naive_diversity.hpp"
#include "support/generators.hpp"

using namespace inp2cpa;
using namespace inp2cpa::resilience;

namespace {

LogicalGraph graph(std::vector<std::string> vertices, std::vector<std::pair<std::string, std::string>> edges) {
    LogicalGraph g;
    g.vertices = std::move(vertices);
    g.directed_edges.insert(edges.begin(), edges.end());
    return g;
}

LogicalGraph triangle() {
    return graph({"A", "B", "C"}, {{"A", "B"}, {"B", "A"}, {"B", "C"}, {"C", "B"}, {"A", "C"}, {"C", "A"}});
}

LogicalGraph chain() { return graph({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}}); }

// s->x->d plus a detour x->c->d.
LogicalGraph detour() { return graph({"S", "X", "C", "D"}, {{"S", "X"}, {"X", "D"}, {"X", "C"}, {"C", "D"}}); }

LogicalGraph complete(int n) {
    LogicalGraph g;
    for (int i = 0; i < n; ++i) g.vertices.push_back(std::string(1, static_cast<char>('A' + i)));
    for (const auto& a : g.vertices) {
        for (const auto& b : g.vertices) {
            if (a != b) g.directed_edges.insert({a, b});
        }
    }
    return g;
}

Path path(std::vector<std::string> v) { return Path{std::move(v)}; }

oracle::Graph to_oracle(const LogicalGraph& g) {
    oracle::Graph o;
    o.vertices = g.vertices;
    o.edges.insert(g.directed_edges.begin(), g.directed_edges.end());
    return o;
}

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("path diversity") {
    CHECK(path_diversity(path({"S", "X", "D"}), path({"S", "X", "D"})) == 0.0);
    CHECK(path_diversity(path({"S", "D"}), path({"S", "M", "D"})) == 1.0);
    CHECK(path_diversity(path({"S", "X", "D"}), path({"S", "X", "C", "D"})) == doctest::Approx(0.6).epsilon(1e-15));
    // Not symmetric: normalized by the second path.
    CHECK(path_diversity(path({"S", "X", "C", "D"}), path({"S", "X", "D"})) == doctest::Approx(1.0 - 2.0 / 3.0));
    CHECK(code_of([] { path_diversity(path({"S", "D"}), path({"S", "E"})); }) == ErrorCode::EndpointMismatch);
    CHECK(code_of([] { path_diversity(path({"S"}), path({"S", "E"})); }) == ErrorCode::EndpointMismatch);
}

TEST_CASE("shortest path") {
    CHECK(shortest_path(triangle(), "A", "C") == path({"A", "C"}));
    CHECK(shortest_path(chain(), "A", "C") == path({"A", "B", "C"}));
    CHECK_FALSE(shortest_path(graph({"A", "Z"}, {}), "A", "Z"));
    CHECK(code_of([] { shortest_path(chain(), "A", "Q"); }) == ErrorCode::UnknownVertex);
    // Two two-hop routes: the smaller sequence wins.
    const auto diamond = graph({"S", "B", "A", "D"}, {{"S", "B"}, {"S", "A"}, {"B", "D"}, {"A", "D"}});
    CHECK(shortest_path(diamond, "S", "D") == path({"S", "A", "D"}));
}

TEST_CASE("simple path enumeration") {
    CHECK(all_simple_paths(triangle(), "A", "C") == std::vector<Path>{path({"A", "B", "C"}), path({"A", "C"})});
    CHECK(all_simple_paths(chain(), "A", "C").size() == 1);
    CHECK(all_simple_paths(chain(), "C", "A").empty());
    Bounds tight;
    tight.max_paths = 3;
    CHECK(code_of([&] { all_simple_paths(complete(6), "A", "F", tight); }) == ErrorCode::EnumerationBudgetExceeded);
    CHECK(all_simple_paths(complete(6), "A", "F").size() == 65);
    Bounds hops;
    hops.max_hops = 2;
    CHECK(all_simple_paths(complete(6), "A", "F", hops).size() == 5);
}

TEST_CASE("k_sd, best against p0") {
    CHECK(k_sd_max(chain(), "A", "C") == 0.0);
    CHECK(k_sd_max(chain(), "C", "A") == 0.0);
    CHECK(k_sd_max(triangle(), "A", "C") == 1.0);
    CHECK(k_sd_max(detour(), "S", "D") == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(k_sd_max(detour(), "S", "D", 0.7) == 0.0);
    CHECK(k_sd_max(detour(), "S", "D", 0.59) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(code_of([] { k_sd_max(chain(), "A", "Q"); }) == ErrorCode::UnknownVertex);
}

TEST_CASE("k_sd, cumulative") {
    CHECK(k_sd_cumulative(chain(), "A", "C", 3) == 0.0);
    CHECK(k_sd_cumulative(triangle(), "A", "C", 1) == 1.0);
    const auto fan = graph({"S", "A", "B", "D"}, {{"S", "D"}, {"S", "A"}, {"A", "D"}, {"S", "B"}, {"B", "D"}});
    CHECK(k_sd_cumulative(fan, "S", "D", 2) == 2.0);
    CHECK(k_sd_cumulative(fan, "S", "D", 1) == 1.0);
    CHECK(k_sd_cumulative(fan, "S", "D", 5) == 2.0);
    CHECK(k_sd_cumulative(detour(), "S", "D", 3, 0.7) == 0.0);
    CHECK(code_of([] { k_sd_cumulative(chain(), "A", "C", 0); }) == ErrorCode::InvalidParams);
}

TEST_CASE("cumulative matches brute force over selection orders") {
    // S->D direct plus two disjoint detours and one that shares a vertex.
    const auto g = graph({"S", "A", "B", "C", "D"},
                         {{"S", "D"}, {"S", "A"}, {"A", "D"}, {"S", "B"}, {"B", "D"}, {"A", "C"}, {"C", "D"}});
    const auto paths = oracle::simple_paths(to_oracle(g), "S", "D");
    const oracle::Path p0{"S", "D"};
    // Best total of D_min over every ordered choice of two paths after p0.
    double best = 0.0;
    for (const auto& a : paths) {
        for (const auto& b : paths) {
            if (a == p0 || b == p0 || a == b) continue;
            const double da = oracle::diversity(p0, a);
            const double db = std::min(oracle::diversity(p0, b), oracle::diversity(a, b));
            best = std::max(best, da + db);
        }
    }
    CHECK(best == 2.0);
    CHECK(k_sd_cumulative(g, "S", "D", 2) == best);
}

TEST_CASE("epd") {
    CHECK(effective_path_diversity(0, 1) == 0.0);
    CHECK(effective_path_diversity(1, 1) == doctest::Approx(0.632121).epsilon(1e-6));
    CHECK(effective_path_diversity(1, 5) == doctest::Approx(0.993262).epsilon(1e-6));
    DiversityParams p;
    CHECK(epd(triangle(), "A", "C", p) == doctest::Approx(1 - std::exp(-1.0)));
    CHECK(epd(chain(), "A", "C", p) == 0.0);
    p.lambda = 0;
    CHECK(code_of([&] { epd(triangle(), "A", "C", p); }) == ErrorCode::InvalidParams);
}

TEST_CASE("params are checked") {
    DiversityParams p;
    CHECK_NOTHROW(check(p));
    p.t_ksd = 1.0;
    CHECK_THROWS_AS(check(p), Error);
    p = {};
    p.lambda = -1;
    CHECK_THROWS_AS(check(p), Error);
    p = {};
    p.k_paths = 0;
    CHECK_THROWS_AS(check(p), Error);
    p = {};
    p.bounds.max_paths = 0;
    CHECK_THROWS_AS(check(p), Error);
}

TEST_CASE("tgd") {
    DiversityParams p;
    CHECK(tgd(graph({"A", "B"}, {{"A", "B"}}), p) == 0.0);
    for (double lambda : {0.2, 1.0, 5.0}) {
        p.lambda = lambda;
        CHECK(tgd(triangle(), p) == doctest::Approx(1 - std::exp(-lambda)).epsilon(1e-12));
    }
    CHECK(tgd(graph({"A", "B", "C", "D"}, {}), p) == 0.0);
    CHECK(code_of([&] { tgd(graph({"A"}, {}), p); }) == ErrorCode::GraphTooSmall);
    CHECK(code_of([&] { tgd(graph({}, {}), p); }) == ErrorCode::GraphTooSmall);
}

TEST_CASE("report") {
    DiversityParams p;
    const auto r = resilience_report(triangle(), {5, 0.2, 1}, p);
    CHECK(r.lambdas == std::vector<double>{0.2, 1, 5});
    REQUIRE(r.tgd.size() == 3);
    CHECK(r.tgd[0] == doctest::Approx(0.181269).epsilon(1e-6));
    CHECK(r.tgd[1] == doctest::Approx(0.632121).epsilon(1e-6));
    CHECK(r.tgd[2] == doctest::Approx(0.993262).epsilon(1e-6));
    REQUIRE(r.pairs.size() == 6);
    CHECK(r.pairs.front().source == "A");
    CHECK(r.pairs.front().destination == "B");
    CHECK(r.pairs.back().source == "C");
    CHECK(r.pairs.back().destination == "B");

    const auto two = resilience_report(graph({"A", "B"}, {{"A", "B"}}), {1, 0.2}, p);
    CHECK(two.tgd == std::vector<double>{0, 0});
    CHECK_THROWS_AS(resilience_report(triangle(), {}, p), Error);
}

TEST_CASE("parallel and serial agree") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 40; ++i) {
        const auto g = testgen::random_graph(rng, 7, 0.35);
        for (auto mode : {Mode::alg2_max, Mode::eq3_cumulative}) {
            DiversityParams p;
            p.mode = mode;
            CHECK(pairwise_k_sd(g, p, Execution::serial) == pairwise_k_sd(g, p, Execution::parallel));
            CHECK(tgd(g, p, Execution::serial) == tgd(g, p, Execution::parallel));
        }
    }
}

TEST_CASE("parallel run reports the first failing pair") {
    DiversityParams p;
    p.bounds.max_paths = 2;
    CHECK(code_of([&] { pairwise_k_sd(complete(5), p, Execution::parallel); }) ==
          ErrorCode::EnumerationBudgetExceeded);
}

TEST_CASE("agrees with the naive oracle on small graphs") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 60; ++i) {
        const auto g = testgen::random_graph(rng, 2 + i % 5, 0.4);
        const auto o = to_oracle(g);
        for (const auto& s : g.vertices) {
            for (const auto& d : g.vertices) {
                if (s == d) continue;
                CHECK(k_sd_max(g, s, d) == oracle::k_sd(o, s, d));
                CHECK(k_sd_max(g, s, d, 0.5) == oracle::k_sd(o, s, d, 0.5));
            }
        }
    }
}

TEST_CASE("bounds of every output") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 30; ++i) {
        const auto g = testgen::random_graph(rng, 6, 0.5);
        DiversityParams p;
        p.mode = i % 2 ? Mode::eq3_cumulative : Mode::alg2_max;
        const auto r = resilience_report(g, {0.2, 1, 5}, p);
        for (const auto& rec : r.pairs) {
            CHECK(rec.k_sd >= 0);
            for (double e : rec.epd) CHECK((e >= 0 && e < 1));
        }
        for (double t : r.tgd) CHECK((t >= 0 && t < 1));
        CHECK(r.tgd[0] <= r.tgd[1]);
        CHECK(r.tgd[1] <= r.tgd[2]);
    }
}
