#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "walkcensus/generators.hpp"
#include "walkcensus/motif_counts.hpp"
#include "walkcensus/theory.hpp"

using namespace walkcensus;

namespace {
Kernel two_block() { return Kernel::blockmodel({0.5, 0.5}, {{1.5, 0.5}, {0.5, 1.5}}); }

std::set<CanonicalCode> codes(const std::vector<CanonicalCode>& v) { return {v.begin(), v.end()}; }
} // namespace

TEST_CASE("kernel embedding densities") {
    CHECK(kernel_embedding_density(cycle_graph(3), Kernel::constant()) == 1.0);
    // s(K_2, kappa) = ||kappa||_1 = 1
    CHECK(kernel_embedding_density(path_graph(2), two_block()) == Catch::Approx(1.0));
    // rank-one kernels factor into per-vertex moments
    Kernel r1 = Kernel::rank_one({0.5, 0.5}, {1.2, 0.8});
    double m2 = 0.5 * (1.2 * 1.2 + 0.8 * 0.8);
    CHECK(kernel_embedding_density(cycle_graph(3), r1) == Catch::Approx(m2 * m2 * m2));
    CHECK(kernel_embedding_density(cycle_graph(5), r1) == Catch::Approx(std::pow(m2, 5)));
    // the same kernel expressed as a blockmodel agrees
    Kernel r1_as_block = Kernel::blockmodel(
        {0.5, 0.5}, {{1.2 * 1.2, 1.2 * 0.8}, {0.8 * 1.2, 0.8 * 0.8}});
    CHECK(kernel_embedding_density(star_graph(3), r1) ==
          Catch::Approx(kernel_embedding_density(star_graph(3), r1_as_block)));
    // numeric integration oracle for the two-block triangle density
    {
        Kernel k2 = two_block();
        const int grid = 100;
        double acc = 0;
        auto val = [&](int a, int b) { return k2.values[a][b]; };
        for (int x = 0; x < grid; ++x)
            for (int y = 0; y < grid; ++y)
                for (int z = 0; z < grid; ++z) {
                    int bx = x < grid / 2 ? 0 : 1, by = y < grid / 2 ? 0 : 1, bz = z < grid / 2 ? 0 : 1;
                    acc += val(bx, by) * val(by, bz) * val(bz, bx);
                }
        acc /= double(grid) * grid * grid;
        CHECK(kernel_embedding_density(cycle_graph(3), k2) == Catch::Approx(acc).epsilon(1e-9));
    }
}

TEST_CASE("nu_k values") {
    for (int k = 3; k <= 8; ++k) CHECK(nu_k(cycle_graph(k), k) == Catch::Approx(1.0));
    CHECK(nu_k(path_graph(2), 4) == Catch::Approx(1.0)); // ind_4(P_2) = 2, aut = 2
    SmallGraph disconnected;
    disconnected.n = 4;
    disconnected.add_edge(0, 1);
    disconnected.add_edge(2, 3);
    CHECK(nu_k(disconnected, 6) == 0.0);
}

TEST_CASE("expected_ind_kernel closed forms and Monte Carlo") {
    // E ind_2(K_2, G) = n(n-1) rho
    CHECK(expected_ind_kernel(path_graph(2), 2, 50, 0.1) == Catch::Approx(50 * 49 * 0.1));
    // E ind_3(C_3, G(n, rho)) = (n)_3 rho^3, checked against simulation
    const int n = 100, reps = 300;
    const double rho = 0.15;
    std::vector<double> vals;
    for (int r = 0; r < reps; ++r) {
        Graph g = sample_erdos_renyi(n, rho, 900 + r);
        vals.push_back(6.0 * to_double(cycle_count(g, 3)));
    }
    double m = mean(vals);
    double se = std::sqrt(sample_variance(vals) / reps);
    double expect = expected_ind_kernel(cycle_graph(3), 3, n, rho);
    CHECK(std::fabs(m - expect) < 4 * se);
}

TEST_CASE("k_star examples") {
    CHECK(k_star(1e4, 1e-2) == Catch::Approx(4.0));
    CHECK(k_star(4096, 1.0 / 256) == Catch::Approx(6.0));
    CHECK_THROWS_AS(k_star(100, 0.005), std::domain_error);
}

TEST_CASE("kernel dominance table and the Psi-order argmax agree") {
    struct Case {
        int k;
        double n, rho;
        int expect_case;
    };
    // parameters hitting all seven cases
    std::vector<Case> sweep{
        {5, 4096, 1.0 / 256, 1},   // odd
        {8, 16384, 32.0 / 16384, 1}, // k* = 5.6, k > k*+2
        {8, 4096, 1.0 / 256, 2},   // k* = 6 = k-2
        {8, 16384, 1.0 / 1024 * 4, 3}, // mu = 64: k* = 14log2/3log2 = 4.667, 8 > 6.67 -> case 1.. adjusted below
        {6, 4096, 1.0 / 256, 4},   // k* = 6
        {6, 16384, 1.0 / 1024, 5}, // k* = 7, 6 in (5,7)
        {6, 65536, 1.0 / 4096, 6}, // k* = 8 = k+2
        {4, 6561, 9.0 / 6561, 7}, // k* = 8, k < k*-2
    };
    sweep[3] = {8, 16384, 16.0 / 16384, 3}; // mu = 16: k* = 7, 8 in (7,9)
    for (const auto& c : sweep) {
        DominanceReport r = dominant_shapes_kernel(c.k, c.n, c.rho);
        INFO("k=" << c.k << " n=" << c.n << " rho=" << c.rho << " k*=" << r.k_star_value);
        CHECK(r.case_id == c.expect_case);
        CHECK(r.first_order_ratio > 1.0);
        // dominant / subdominant sets must equal the Psi-order maximizers
        const auto& shapes = enumerate_walk_shapes(c.k);
        auto psi = [&](const WalkShape& s) {
            return double(s.v) * std::log(c.n) + double(s.e) * std::log(c.rho);
        };
        double best = -1e300;
        for (const auto& s : shapes) best = std::max(best, psi(s));
        std::set<CanonicalCode> psi_dom, psi_sub;
        double second = -1e300;
        for (const auto& s : shapes) {
            if (psi(s) > best - 1e-9)
                psi_dom.insert(s.code);
            else
                second = std::max(second, psi(s));
        }
        for (const auto& s : shapes)
            if (psi(s) <= best - 1e-9 && psi(s) > second - 1e-9) psi_sub.insert(s.code);
        CHECK(codes(r.dominant) == psi_dom);
        CHECK(codes(r.subdominant) == psi_sub);
    }
    // named expectations
    DominanceReport odd = dominant_shapes_kernel(5, 4096, 1.0 / 256);
    CHECK(codes(odd.dominant) == std::set<CanonicalCode>{code_of_cycle(5)});
    CHECK(codes(odd.subdominant) == std::set<CanonicalCode>{code_of_tadpole(3, 1)});
    DominanceReport trees = dominant_shapes_kernel(4, 6561, 9.0 / 6561); // k* = 8
    CHECK(codes(trees.dominant) == std::set<CanonicalCode>{code_of_path(3)});
    DominanceReport cyc = dominant_shapes_kernel(8, 4096, 1.0 / 256); // k* = 6
    CHECK(codes(cyc.dominant) == std::set<CanonicalCode>{code_of_cycle(8)});
}

TEST_CASE("non-backtracking dominance") {
    CHECK(largest_divisor_h(6) == 3);
    CHECK(largest_divisor_h(8) == 4);
    CHECK(largest_divisor_h(9) == 3);
    CHECK(largest_divisor_h(12) == 6);
    CHECK_FALSE(largest_divisor_h(7).has_value());
    CHECK_FALSE(largest_divisor_h(4).has_value());

    for (int k = 3; k <= 5; ++k) {
        DominanceReport r = dominant_shapes_nb(k, 4096, 1.0 / 256);
        CHECK(codes(r.dominant) == std::set<CanonicalCode>{code_of_cycle(k)});
        CHECK(r.subdominant.empty());
        CHECK(r.first_order_ratio == 1.0);
    }
    // k = 6 at k* = 10: k - h = 3 < 5 -> subdominant {C_3}
    DominanceReport big = dominant_shapes_nb(6, 1e10, 100.0 / 1e10);
    CHECK(big.case_id == 1);
    CHECK(codes(big.subdominant) == std::set<CanonicalCode>{code_of_cycle(3)});
    // k = 6 at k* = 6: k - h = 3 = k*/2 -> {C_3} plus the lemniscate
    DominanceReport edge = dominant_shapes_nb(6, 4096, 1.0 / 256);
    CHECK(edge.case_id == 2);
    CHECK(codes(edge.subdominant) ==
          std::set<CanonicalCode>{code_of_cycle(3), canonical_form(lemniscate_graph(3, 3))});
    // prime k: lemniscates only
    DominanceReport prime = dominant_shapes_nb(7, 4096, 1.0 / 256);
    CHECK(prime.case_id == 3);
    CHECK(codes(prime.subdominant) == std::set<CanonicalCode>{canonical_form(lemniscate_graph(3, 4))});
    CHECK(codes(prime.dominant) == std::set<CanonicalCode>{code_of_cycle(7)});
    DominanceReport nine = dominant_shapes_nb(9, 4096, 1.0 / 256);
    CHECK(nine.case_id == 3); // k - h = 6 > k*/2 = 3
    CHECK(codes(nine.subdominant) == std::set<CanonicalCode>{canonical_form(lemniscate_graph(3, 6)),
                                                             canonical_form(lemniscate_graph(4, 5))});
}

TEST_CASE("log expected copies decompositions") {
    auto kd = log_expected_copies_kernel(cycle_graph(3), 3, 1e4, 1e-2);
    CHECK(kd.node_term == Catch::Approx(3 * std::log(1e4)));
    CHECK(kd.local_penalty == Catch::Approx(3 * std::fabs(std::log(1e-2))));
    auto pd = log_expected_copies_powerlaw(star_graph(3), 1e4, 0.3, 1.0);
    CHECK(pd.local_penalty == Catch::Approx(1.8 * std::log(1e4)));
    // gamma -> 0 consistency with the kernel form: penalty ~ 2 e gamma log n
    double gamma = 1e-4;
    auto tiny = log_expected_copies_powerlaw(cycle_graph(3), 1e4, gamma, 1.0);
    CHECK(tiny.local_penalty == Catch::Approx(6 * gamma * std::log(1e4)).epsilon(1e-9));
}

TEST_CASE("single power sums match their displayed asymptotics") {
    // d=(2), gamma=0.5, n=100: exact H_100, asymptotic log(100) + euler
    CHECK(S_gamma_exact({2}, 100, 0.5) == Catch::Approx(5.1873775176396202608).epsilon(1e-12));
    CHECK(S_gamma({2}, 100, 0.5).value == Catch::Approx(5.1823858508896242286).epsilon(1e-10));
    // d=(1), gamma=0.3, n=1000
    CHECK(S_gamma({1}, 1000, 0.3).value == Catch::Approx(std::pow(1000.0, 0.7) / 0.7).epsilon(1e-12));
    double rel = std::fabs(S_gamma({1}, 1000, 0.3).value / S_gamma_exact({1}, 1000, 0.3) - 1.0);
    CHECK(rel < 0.02); // O(n^{-0.7}) scale
    // d=(3), gamma=0.5: zeta(1.5)
    CHECK(S_gamma({3}, 100000, 0.5).value == Catch::Approx(2.6123753486854883433).margin(1e-10));
    CHECK_THROWS(S_gamma({0}, 100, 0.5));
    CHECK_THROWS(S_gamma({3, 1}, 100, 0.5)); // must be non-decreasing
}

TEST_CASE("exact distinct sums match brute force") {
    std::vector<std::vector<int>> tuples{{1}, {2}, {1, 1}, {1, 2}, {2, 2}, {1, 1, 2}, {2, 2, 2}, {1, 1, 1, 3}};
    for (double gamma : {0.3, 0.5, 0.7}) {
        for (const auto& d : tuples) {
            double exact = S_gamma_exact(d, 30, gamma);
            double brute = S_gamma_exact_bruteforce(d, 30, gamma);
            CHECK(exact == Catch::Approx(brute).epsilon(1e-10));
        }
    }
}

TEST_CASE("asymptotic error shrinks with n") {
    std::vector<std::vector<int>> tuples{{1, 1}, {1, 2}, {2, 2, 2}};
    for (const auto& d : tuples) {
        double prev = 1e9;
        for (double n : {1e3, 1e4, 1e5}) {
            double a = S_gamma(d, std::uint64_t(n), 0.4).value;
            double e = S_gamma_exact(d, std::uint64_t(n), 0.4);
            double rel = std::fabs(a / e - 1.0);
            CHECK(rel < prev + 1e-12);
            prev = rel;
        }
    }
}

TEST_CASE("C_gamma identities") {
    CHECK(C_gamma({3}, 0.5) == Catch::Approx(zeta(1.5)).margin(1e-12));
    // two degrees: zeta zeta minus zeta, to 1e-9
    double lhs = C_gamma({2, 2}, 0.6);
    double rhs = zeta(1.2) * zeta(1.2) - zeta(2.4);
    CHECK(lhs == Catch::Approx(rhs).margin(1e-9));
    CHECK(C_gamma({2, 3}, 0.6) == Catch::Approx(zeta(1.2) * zeta(1.8) - zeta(3.0)).margin(1e-9));
    CHECK_THROWS_AS(C_gamma({1, 2}, 0.6), std::domain_error);
}

TEST_CASE("power-law expected copies: formula vs exact vs simulation") {
    std::vector<std::pair<SmallGraph, const char*>> shapes;
    shapes.emplace_back(path_graph(2), "K2");
    shapes.emplace_back(path_graph(3), "P3");
    shapes.emplace_back(cycle_graph(3), "C3");
    shapes.emplace_back(star_graph(3), "K13");
    for (double gamma : {0.3, 0.5, 0.7}) {
        for (auto& [f, name] : shapes) {
            INFO("gamma=" << gamma << " shape=" << name);
            double approx = expected_X_powerlaw(f, 500, gamma, 1.0).value;
            double exact = expected_X_powerlaw_exact(f, 500, gamma, 1.0);
            CHECK(std::fabs(approx / exact - 1.0) < 0.05);
            double approx_big = expected_X_powerlaw(f, 5000, gamma, 1.0).value;
            double exact_big = expected_X_powerlaw_exact(f, 5000, gamma, 1.0);
            CHECK(std::fabs(approx_big / exact_big - 1.0) <= std::fabs(approx / exact - 1.0) + 1e-9);
        }
    }
    // theta scaling and the trivial limit
    CHECK(expected_X_powerlaw(cycle_graph(3), 300, 0.4, 1e-6).value ==
          Catch::Approx(1e-36 * S_gamma_exact({2, 2, 2}, 300, 0.4) / 6.0).epsilon(0.05));
    // Monte Carlo: E X_{K_2} and E X_{C_3} against sampled graphs
    PowerLawModel m(150, 0.35, 0.9);
    const int reps = 200;
    std::vector<double> edges, tris;
    for (int r = 0; r < reps; ++r) {
        Graph g = sample_powerlaw_graph(m, 7000 + r);
        edges.push_back(double(g.edge_count()));
        tris.push_back(to_double(cycle_count(g, 3)));
    }
    double e_exact = expected_X_powerlaw_exact(path_graph(2), 150, 0.35, 0.9);
    double t_exact = expected_X_powerlaw_exact(cycle_graph(3), 150, 0.35, 0.9);
    CHECK(std::fabs(mean(edges) - e_exact) < 4 * std::sqrt(sample_variance(edges) / reps));
    CHECK(std::fabs(mean(tris) - t_exact) < 4 * std::sqrt(sample_variance(tris) / reps) + 1e-9);
}

TEST_CASE("power-law walk density leading term") {
    CHECK(log_walk_density_powerlaw(path_graph(2), 1e4, 0.3, 1.0) ==
          Catch::Approx(-0.6 * std::log(1e4)));
    CHECK(log_walk_density_powerlaw(cycle_graph(3), 1e4, 0.6, 1.0) ==
          Catch::Approx(-3.0 * std::log(1e4)));
    double base = log_walk_density_powerlaw(cycle_graph(3), 1e4, 0.3, 1.0);
    double halved = log_walk_density_powerlaw(cycle_graph(3), 1e4, 0.3, 0.5);
    CHECK(base - halved == Catch::Approx(6 * std::log(2.0)));
    CHECK(beta_exponent(1.0, 100) == 0.0);
    CHECK(beta_exponent(std::pow(100.0, -0.1), 100) == Catch::Approx(0.1));
    CHECK(beta_exponent(0.5, std::exp(10.0)) == Catch::Approx(0.0693147).epsilon(1e-4));
}

TEST_CASE("power-law regime classifier covers every branch") {
    // sub-critical
    auto r1 = regime_powerlaw(4, 0.2, 0.0);
    CHECK(r1.classified);
    CHECK(r1.k_star_value == Catch::Approx(10.0 / 3));
    CHECK(r1.dominating == std::vector<ShapeFamily>{ShapeFamily::cycle_k});
    auto r1o = regime_powerlaw(5, 0.2, 0.0);
    CHECK(r1o.dominating == std::vector<ShapeFamily>{ShapeFamily::cycle_k});
    auto r1t = regime_powerlaw(2, 0.2, 0.0); // k = 2 < k*: trees (K_2)
    CHECK(r1t.dominating == std::vector<ShapeFamily>{ShapeFamily::trees_half});
    // critical: beta + gamma = (1-gamma)/2
    auto r2 = regime_powerlaw(8, 0.25, 0.125);
    CHECK(r2.branch.find("critical") != std::string::npos);
    CHECK(r2.k_star_value == Catch::Approx(8.0));
    CHECK(r2.dominating == std::vector<ShapeFamily>{ShapeFamily::cycle_k, ShapeFamily::star_half});
    auto r2small = regime_powerlaw(6, 0.25, 0.125);
    CHECK(r2small.dominating == std::vector<ShapeFamily>{ShapeFamily::trees_half});
    // super-critical
    auto r3 = regime_powerlaw(6, 0.4, 0.05);
    CHECK(r3.k_dagger == Catch::Approx(5.0));
    CHECK(r3.dominating == std::vector<ShapeFamily>{ShapeFamily::star_half});
    auto r3odd = regime_powerlaw(5, 0.4, 0.05);
    CHECK(r3odd.dominating == std::vector<ShapeFamily>{ShapeFamily::cycle_k});
    auto r3far = regime_powerlaw(13, 0.3, 0.1); // k+ = 11, k odd beyond it
    CHECK(r3far.k_circ == Catch::Approx(11.0));
    CHECK(r3far.dominating == std::vector<ShapeFamily>{ShapeFamily::triangle_star});
    auto r3bnd = regime_powerlaw(11, 0.3, 0.1); // k = k+ > k_dagger + 1
    CHECK(r3bnd.dominating ==
          std::vector<ShapeFamily>{ShapeFamily::cycle_k, ShapeFamily::triangle_star});
    // unclassified region
    auto r4 = regime_powerlaw(4, 0.4, 0.2);
    CHECK_FALSE(r4.classified);
    // NB statement
    CHECK(r1.nb_cycle_dominated);
    CHECK_FALSE(r4.nb_cycle_dominated);
}

TEST_CASE("tree and unicyclic dominance rates") {
    SmallGraph p4 = path_graph(4);
    CHECK(star_dominance_rate(p4, 0.2).kind == DominanceRate::Kind::theta_one);
    CHECK(star_dominance_rate(p4, 1.0 / 3).kind == DominanceRate::Kind::theta_inv_log);
    auto mid = star_dominance_rate(p4, 0.4);
    CHECK(mid.kind == DominanceRate::Kind::big_o_power);
    CHECK(mid.exponent == Catch::Approx(0.2));
    CHECK(star_dominance_rate(p4, 0.6).kind == DominanceRate::Kind::big_o_inv_n);
    CHECK(star_dominance_rate(p4, 1.0).kind == DominanceRate::Kind::big_o_inv_log);
    CHECK_THROWS(star_dominance_rate(star_graph(3), 0.4));
    CHECK_THROWS(star_dominance_rate(cycle_graph(4), 0.4));

    SmallGraph u = tadpole_graph(4, 1); // unicyclic, 5 edges
    CHECK(unicyclic_dominance_rate(u, 0.2).kind == DominanceRate::Kind::theta_one);
    CHECK(unicyclic_dominance_rate(u, 0.25).kind == DominanceRate::Kind::theta_inv_log);
    auto um = unicyclic_dominance_rate(u, 0.3);
    CHECK(um.kind == DominanceRate::Kind::big_o_power);
    CHECK(um.exponent == Catch::Approx(std::min({0.3, 0.4, 0.2})));
    CHECK(unicyclic_dominance_rate(u, 0.5).kind == DominanceRate::Kind::big_o_inv_log);
    CHECK_THROWS(unicyclic_dominance_rate(triangle_star_graph(2), 0.3));
}

TEST_CASE("empirical dominance fractions") {
    auto er_sampler = [](double p, int n) {
        return [p, n](std::uint64_t s) { return sample_erdos_renyi(n, p, s); };
    };
    // the full W_5 set partitions all closed 5-walks: fraction is exactly 1
    std::vector<SmallGraph> w5;
    for (const auto& s : enumerate_walk_shapes(5)) w5.push_back(s.rep);
    auto full = empirical_dominance_fraction(er_sampler(0.3, 40), 5, w5, 12, 99);
    CHECK(full.fraction == Catch::Approx(1.0).margin(1e-12));
    // dense graphs at k = 5 are cycle-dominated; the closed-form expectation
    // ratio puts the fraction near 0.85 at these sizes
    std::vector<SmallGraph> c5{cycle_graph(5)};
    auto dense = empirical_dominance_fraction(er_sampler(0.5, 64), 5, c5, 12, 5);
    CHECK(dense.fraction >= 0.8);
    double predicted = 1.0 / dominant_shapes_kernel(5, 64, 0.5).first_order_ratio;
    CHECK(dense.fraction == Catch::Approx(predicted).margin(0.03));
    CHECK(dense.ci_low <= dense.fraction);
    // an edgeless model has no walks at all
    auto empty_sampler = [](std::uint64_t) { return Graph(10); };
    CHECK_THROWS_AS(empirical_dominance_fraction(empty_sampler, 4, c5, 3, 1), std::domain_error);
}

TEST_CASE("rate experiment smoke: extreme alphas") {
    auto rows = rate_experiment({0.0, 1.0}, 7, 9, 31, 6);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].predicted == Catch::Approx(0.0));
    CHECK(rows[1].predicted == Catch::Approx(1.0));
    CHECK(std::fabs(rows[0].estimated - 0.0) < 0.15);
    CHECK(std::fabs(rows[1].estimated - 1.0) < 0.15);
}
