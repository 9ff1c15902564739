#include <catch2/catch_amalgamated.hpp>

#include "walkcensus/int128.hpp"
#include "walkcensus/prng.hpp"
#include "walkcensus/stats.hpp"

using namespace walkcensus;

TEST_CASE("falling factorial and binomial") {
    CHECK(falling_factorial(5, 3) == 60);
    CHECK(falling_factorial(9, 9) == 362880);
    CHECK(falling_factorial(3, 5) == 0);
    CHECK(binomial_u128(6, 4) == 15);
    CHECK(binomial_u128(52, 26) == u128(495918532948104ull));
    // (n)_k overflows 64 bits already for moderate n
    u128 big = falling_factorial(100, 12);
    CHECK(to_double(big) == Catch::Approx(std::exp(std::lgamma(101.0) - std::lgamma(89.0))).epsilon(1e-12));
    CHECK_THROWS_AS(checked_mul(~u128(0), 2), count_overflow);
}

TEST_CASE("rational reduction and equality") {
    Rat128 a(6, 8), b(3, 4);
    CHECK(a == b);
    CHECK(a.value() == Catch::Approx(0.75));
    CHECK(Rat128(0, 7) == Rat128(0, 1));
    CHECK_THROWS(Rat128(1, 0));
}

TEST_CASE("counter rng reproducibility and stream independence") {
    CounterRng a(42, Stream::edges), b(42, Stream::edges);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CounterRng c(42, Stream::latents);
    bool all_equal = true;
    CounterRng a2(42, Stream::edges);
    for (int i = 0; i < 16; ++i) all_equal = all_equal && (a2.next_u64() == c.next_u64());
    CHECK_FALSE(all_equal);
    // substreams differ
    CounterRng s0(7, Stream::subsets, 0), s1(7, Stream::subsets, 1);
    CHECK(s0.next_u64() != s1.next_u64());
}

TEST_CASE("uniform moments sane") {
    CounterRng r(123, Stream::generic);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = r.next_double();
        s += u;
        s2 += u * u;
    }
    CHECK(s / n == Catch::Approx(0.5).margin(0.005));
    CHECK(s2 / n == Catch::Approx(1.0 / 3).margin(0.005));
}

TEST_CASE("geometric skip matches direct bernoulli scanning") {
    const double p = 0.03;
    CounterRng r(5, Stream::edges);
    // mean number of failures before a success is (1-p)/p
    double total = 0;
    const int reps = 50000;
    for (int i = 0; i < reps; ++i) total += double(r.geometric_skip(p));
    double mean_skip = total / reps;
    CHECK(mean_skip == Catch::Approx((1 - p) / p).epsilon(0.05));
}

TEST_CASE("normal quantile matches high-precision oracle") {
    // mpmath: Phi^{-1}(0.9875) and Phi^{-1}(0.999375)
    CHECK(normal_quantile(0.9875) == Catch::Approx(2.2414027276049453536).epsilon(1e-12));
    CHECK(normal_quantile(0.999375) == Catch::Approx(3.2272184259631564421).epsilon(1e-12));
    CHECK(normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-15));
    CHECK(normal_cdf(normal_quantile(0.123)) == Catch::Approx(0.123).epsilon(1e-12));
}

TEST_CASE("zeta by Euler-Maclaurin against oracle values") {
    CHECK(zeta(1.2) == Catch::Approx(5.5915824411777507765).margin(1e-11));
    CHECK(zeta(2.4) == Catch::Approx(1.3833428588407357282).margin(1e-11));
    CHECK(zeta(1.5) == Catch::Approx(2.6123753486854883433).margin(1e-11));
    CHECK(zeta(2.0) == Catch::Approx(M_PI * M_PI / 6).margin(1e-11));
    // continuation below 1
    CHECK(zeta(0.6) == Catch::Approx(-1.9526614482240007304).margin(1e-10));
    CHECK_THROWS(zeta(1.0));
}

TEST_CASE("regression slope") {
    std::vector<double> x{1, 2, 3, 4}, y{2.0, 4.1, 5.9, 8.0};
    CHECK(regression_slope(x, y) == Catch::Approx(2.0).margin(0.05));
}

TEST_CASE("kde integrates to one and silverman bandwidth positive") {
    std::vector<double> sample{0.2, 0.25, 0.3, 0.31, 0.5, 0.55};
    double h = silverman_bandwidth(sample);
    CHECK(h > 0);
    auto c = gaussian_kde(sample, h, -1.0, 2.0, 601);
    CHECK(c.integral() == Catch::Approx(1.0).margin(1e-3));
}
