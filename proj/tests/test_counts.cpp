#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "walkcensus/graph.hpp"
#include "walkcensus/motif_counts.hpp"
#include "walkcensus/prng.hpp"

using namespace walkcensus;

namespace {

Graph er_graph(int n, double p, std::uint64_t seed) {
    CounterRng rng(seed, Stream::edges);
    std::vector<std::pair<int, int>> es;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (rng.bernoulli(p)) es.emplace_back(a, b);
    return Graph(n, es);
}

Graph petersen() {
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < 5; ++i) {
        es.emplace_back(i, (i + 1) % 5);          // outer cycle
        es.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner star polygon
        es.emplace_back(i, 5 + i);                // spokes
    }
    return Graph(10, es);
}

Graph from_small(const SmallGraph& s) {
    std::vector<std::pair<int, int>> es;
    for (auto [a, b] : s.edges()) es.emplace_back(a, b);
    return Graph(s.n, es);
}

} // namespace

TEST_CASE("closed walk counts") {
    Graph k3(3, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(closed_walk_count(k3, 3) == 6);
    Graph single(2, {{0, 1}});
    CHECK(closed_walk_count(single, 2) == 2);
    // oracle: Tr(A^4) of C_4 is 32 (eigenvalues 2, 0, -2, 0)
    Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(closed_walk_count(c4, 4) == 32);
    CHECK(closed_walk_count(c4, 1) == 0);
}

TEST_CASE("dense and sparse traces agree") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        Graph g = er_graph(60, 0.12, 1000 + seed);
        MotifCounter mc(g);
        SubgraphCounts sc(g);
        for (int k = 3; k <= 8; ++k)
            CHECK(mc.closed_walk_count(k) == detail::trace_power_sparse(sc, k));
    }
}

TEST_CASE("trace equals brute-force walk census total") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Graph g = er_graph(10, 0.35, 2000 + seed);
        MotifCounter mc(g);
        for (int k = 2; k <= 8; ++k) {
            auto census = brute_force_walk_census(g, k);
            u128 total = 0;
            for (auto& [code, cnt] : census) total += cnt;
            CHECK(total == mc.closed_walk_count(k));
        }
    }
}

TEST_CASE("cycle counts on reference graphs") {
    Graph k5(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
    CHECK(cycle_count(k5, 3) == 10);
    CHECK(cycle_count_complete(6, 4) == 45);
    CHECK(cycle_count_complete(5, 3) == 10);
    CHECK(cycle_count_complete(9, 9) == 20160);
    Graph p = petersen();
    CHECK(cycle_count(p, 5) == 12);
    CHECK(cycle_count(p, 6) == 10);
    CHECK(cycle_count(p, 3) == 0);
    CHECK(cycle_count(p, 4) == 0);
    CHECK(cycle_count_dfs(p, 5) == 12);
    CHECK(cycle_count_mitm(p, 5) == 12);
    CHECK(cycle_count_mitm(p, 6) == 10);
}

TEST_CASE("cycle counting methods agree on random graphs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Graph g = er_graph(18, 0.25, 3000 + seed);
        MotifCounter mc(g);
        for (int k = 3; k <= 9; ++k) {
            u128 a = cycle_count_dfs(g, k);
            u128 b = cycle_count_mitm(g, k);
            CHECK(a == b);
            if (k <= 7) CHECK(cycle_count_trace(mc, k) == a);
        }
    }
    // denser instances stress the trace corrections
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Graph g = er_graph(13, 0.55, 4000 + seed);
        MotifCounter mc(g);
        for (int k = 3; k <= 7; ++k) CHECK(cycle_count_trace(mc, k) == cycle_count_dfs(g, k));
    }
}

TEST_CASE("closed-form subgraph counters match embedding search") {
    std::vector<std::pair<SmallGraph, const char*>> pats;
    pats.emplace_back(path_graph(4), "P4");
    pats.emplace_back(path_graph(5), "P5");
    pats.emplace_back(star_graph(3), "K13");
    pats.emplace_back(star_graph(4), "K14");
    {
        SmallGraph sp;
        sp.n = 5;
        sp.add_edge(0, 1);
        sp.add_edge(0, 2);
        sp.add_edge(0, 3);
        sp.add_edge(3, 4);
        pats.emplace_back(sp, "spider");
    }
    pats.emplace_back(tadpole_graph(3, 1), "C3P2");
    pats.emplace_back(tadpole_graph(4, 1), "C4P2");
    pats.emplace_back(tadpole_graph(5, 1), "C5P2");
    pats.emplace_back(tadpole_graph(3, 2), "C3P3");
    pats.emplace_back(lemniscate_graph(3, 3), "C3C3");
    pats.emplace_back(lemniscate_graph(3, 4), "C3C4");
    {
        SmallGraph d = cycle_graph(4);
        d.add_edge(0, 2);
        pats.emplace_back(d, "diamond");
    }
    {
        SmallGraph b;
        b.n = 5;
        b.add_edge(0, 1);
        for (int p = 2; p <= 4; ++p) {
            b.add_edge(0, p);
            b.add_edge(1, p);
        }
        pats.emplace_back(b, "book3");
    }
    {
        SmallGraph b = cycle_graph(3);
        b.n = 5;
        b.add_edge(0, 3);
        b.add_edge(1, 4);
        pats.emplace_back(b, "bull");
    }
    pats.emplace_back(triangle_star_graph(2), "cricket");
    {
        SmallGraph h = cycle_graph(5);
        h.add_edge(0, 2);
        pats.emplace_back(h, "house");
    }

    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        double p = 0.25 + 0.05 * double(seed % 5);
        Graph g = er_graph(11, p, 5000 + seed);
        MotifCounter mc(g);
        for (auto& [pat, name] : pats) {
            INFO("pattern " << name << " seed " << seed);
            CHECK(mc.shape_count(canonical_form(pat)) == subgraph_copies(pat, g));
        }
        for (int c = 3; c <= 7; ++c) {
            INFO("cycle " << c << " seed " << seed);
            CHECK(mc.cycle_count(c) == subgraph_copies(cycle_graph(c), g));
        }
    }
}

TEST_CASE("non-backtracking counts") {
    Graph c3(3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(nb_closed_walk_count(c3, 3) == 6);
    Graph tree(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
    for (int k = 3; k <= 8; ++k) CHECK(nb_closed_walk_count(tree, k) == 0);
    Graph c6(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    CHECK(nb_closed_walk_count(c6, 3) == 0);
    CHECK(nb_closed_walk_count(c6, 6) == 12);
    Graph k4(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(nb_closed_walk_count(k4, 6) == 96);
    CHECK(nb_closed_walk_count(petersen(), 5) == 120);
    Graph diamond(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
    CHECK(nb_closed_walk_count(diamond, 6) == 24);
}

TEST_CASE("nb companion and split methods agree, and match the census") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Graph g = er_graph(11, 0.3, 6000 + seed);
        for (int k = 3; k <= 8; ++k) {
            u128 companion = detail::nb_trace_companion(g, k);
            u128 split = detail::nb_trace_split(g, k);
            CHECK(companion == split);
            auto census = brute_force_nb_census(g, k);
            u128 total = 0;
            for (auto& [code, cnt] : census) total += cnt;
            CHECK(total == companion);
        }
    }
}

TEST_CASE("nb census obeys the degree and divisor laws") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Graph g = er_graph(10, 0.4, 7000 + seed);
        for (int k = 3; k <= 8; ++k) {
            auto census = brute_force_nb_census(g, k);
            for (auto& [code, cnt] : census) {
                const auto& table = enumerate_nb_walk_shapes(k);
                const WalkShape* s = find_shape(table, code);
                REQUIRE(s != nullptr);
                CHECK(*std::min_element(s->degrees.begin(), s->degrees.end()) >= 2);
                if (s->e == s->v) CHECK(k % s->v == 0);
            }
        }
    }
}

TEST_CASE("brute censuses against the diamond fixture") {
    Graph diamond(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}});
    auto nb6 = brute_force_nb_census(diamond, 6);
    SmallGraph d = cycle_graph(4);
    d.add_edge(0, 2);
    CHECK(nb6.at(code_of_cycle(3)) == 12);
    CHECK(nb6.at(canonical_form(d)) == 12);
    CHECK(nb6.size() == 2);
    // classification examples
    Graph k3(3, {{0, 1}, {1, 2}, {2, 0}});
    auto w3 = brute_force_walk_census(k3, 3);
    CHECK(w3.size() == 1);
    CHECK(w3.at(code_of_cycle(3)) == 6);
    Graph p2(2, {{0, 1}});
    auto w4 = brute_force_walk_census(p2, 4);
    CHECK(w4.size() == 1);
    CHECK(w4.at(code_of_path(2)) == 2);
    auto nbc6 = brute_force_nb_census(Graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}), 6);
    CHECK(nbc6.size() == 1);
    CHECK(nbc6.at(code_of_cycle(6)) == 12);
}

TEST_CASE("two path counts") {
    Graph k3(3, {{0, 1}, {0, 2}, {1, 2}});
    auto [p1, n1] = two_path_counts(k3);
    CHECK(p1 == 3);
    CHECK(n1 == 3);
    Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
    auto [p2, n2] = two_path_counts(star);
    CHECK(p2 == 3);
    CHECK(n2 == 6);
    Graph empty(5);
    auto [p3, n3] = two_path_counts(empty);
    CHECK(p3 == 0);
    CHECK(n3 == 0);
    CHECK_THROWS(two_path_counts(Graph(2, {{0, 1}})));
}

TEST_CASE("scale summaries") {
    Graph k8 = from_small(complete_graph(8));
    auto t = scale_summaries(k8, 6);
    for (int k = 2; k <= 6; ++k) CHECK(t[k] == Catch::Approx(1.0));
    Graph empty(12);
    auto tz = scale_summaries(empty, 6);
    for (int k = 2; k <= 6; ++k) CHECK(tz[k] == 0.0);
    Graph c5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    // could not have k_max = 5 with n = 5; check k = 4 bound then direct value at n > k
    Graph c6(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
    auto t6 = scale_summaries(c6, 5);
    CHECK(t6[5] == Catch::Approx(0.0));
    CHECK(t6[3] == 0.0);
    (void)c5;
    CHECK_THROWS(scale_summaries(c5, 5));
    // C_5 proportion at k = 5 within a host where it is the only 5-cycle
    Graph host(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    auto th = scale_summaries(host, 5);
    double expect = std::pow(1.0 / to_double(cycle_count_complete(7, 5)), 0.2);
    CHECK(th[5] == Catch::Approx(expect));
}

TEST_CASE("ind_count and walk density") {
    Graph k3(3, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(ind_count(cycle_graph(3), k3, 3) == 6);
    Graph k5(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
    // ind_k(C_k, K_n) = (n)_k; all closed 5-walks on 5 distinct vertices
    CHECK(ind_count(cycle_graph(5), k5, 5) == falling_factorial(5, 5));
    CHECK(graph_walk_density(path_graph(2), k5) == Rat128(1, 1));
    Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(graph_walk_density(cycle_graph(3), c4) == Rat128(0, 1));
    Graph p3(3, {{0, 1}, {1, 2}});
    CHECK(graph_walk_density(path_graph(3), p3) == Rat128(1, 3));
}

TEST_CASE("walk census partition identity across a mixed corpus") {
    // exhaustive ind_count (embedding route) summed over W_k equals the trace
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Graph g = er_graph(11, 0.3 + 0.04 * double(seed), 8000 + seed);
        MotifCounter mc(g);
        for (int k = 2; k <= 7; ++k) {
            u128 total = 0;
            for (const auto& s : enumerate_walk_shapes(k)) total += ind_count(s.rep, g, k);
            CHECK(total == mc.closed_walk_count(k));
        }
    }
}
