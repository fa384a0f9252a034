#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anderson/parallel.hpp"
#include "anderson/random.hpp"
#include "anderson/stats.hpp"
#include "oracles.hpp"

#include <atomic>
#include <set>

using namespace anderson;

TEST_CASE("linear fit agrees with the normal equations")
{
    CounterRng rng(0x57a7);
    for (int t = 0; t < 200; ++t) {
        const int n = oracle::uniform_int(rng, 3, 40);
        std::vector<double> x, y;
        for (int i = 0; i < n; ++i) {
            x.push_back(rng.uniform(-5, 5));
            y.push_back(rng.uniform(-1, 1) + 0.7 * x.back());
        }
        const auto f = linear_fit(x, y);
        const auto o = oracle::ols(x, y);
        REQUIRE(f.slope == doctest::Approx(o.slope).epsilon(1e-10));
        REQUIRE(f.intercept == doctest::Approx(o.intercept).epsilon(1e-10).scale(1.0));
        double sum = 0.0;
        for (double e : f.residuals)
            sum += e;
        REQUIRE(std::abs(sum) < 1e-10);
    }
    CHECK_THROWS(linear_fit(std::vector<double>{1.0}, std::vector<double>{2.0}));
    CHECK_THROWS(linear_fit(std::vector<double>{1.0, 1.0}, std::vector<double>{2.0, 3.0}));
}

TEST_CASE("exact line: zero residuals, tiny p-value")
{
    std::vector<double> x{1, 2, 3, 4, 5, 6}, y;
    for (double v : x)
        y.push_back(3.0 - 2.0 * v + 1e-9 * std::sin(v));
    const auto f = linear_fit(x, y);
    CHECK(f.slope == doctest::Approx(-2.0));
    CHECK(f.p_value < 1e-10);
    CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("p-value of a known t statistic")
{
    // x = 1..4, y = {1, 3, 2, 4}: slope 0.8, RSS 1.8, se = sqrt(0.9 / 5), dof 2.
    // With two degrees of freedom the two-sided p is 1 - t / sqrt(2 + t^2) = 0.2.
    const auto f = linear_fit(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4});
    CHECK(f.slope == doctest::Approx(0.8));
    CHECK(f.slope_stderr == doctest::Approx(std::sqrt(0.18)));
    CHECK(f.p_value == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("log-log slope uses the central window")
{
    std::vector<double> s, p;
    for (int k = 0; k < 30; ++k) {
        s.push_back(std::pow(10.0, -4 + 0.15 * k));
        p.push_back(std::min(1.0, 3.0 * s.back()));
    }
    const auto f = loglog_slope(s, p);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS(loglog_slope(std::vector<double>{1e-5, 1e-4}, std::vector<double>{1e-6, 1e-5}));
}

TEST_CASE("binomial helpers")
{
    CHECK(binomial_stderr(0.5, 100) == doctest::Approx(0.05));
    CHECK(binomial_stderr(0.0, 100) == 0.0);
    auto [lo, hi] = wilson_interval(0, 100);
    CHECK(lo == 0.0);
    CHECK(hi > 0.0);
    CHECK(hi < 0.05);
    auto [lo2, hi2] = wilson_interval(50, 100);
    CHECK(lo2 < 0.5);
    CHECK(hi2 > 0.5);
}

TEST_CASE("stretched exponential recovers planted exponents")
{
    std::vector<double> r, v;
    for (int k = 2; k <= 14; ++k) {
        r.push_back(k);
        v.push_back(0.8 * std::exp(-1.7 * std::pow(k, 0.55)));
    }
    const auto f = fit_stretched_exponential(r, v);
    CHECK(f.kappa == doctest::Approx(0.55).epsilon(1e-9));
    CHECK(f.nu == doctest::Approx(1.7).epsilon(1e-6));
    CHECK(f.log_prefactor == doctest::Approx(std::log(0.8)).epsilon(1e-6));
    CHECK(f.rss < 1e-18);
    CHECK_THROWS(fit_stretched_exponential(std::vector<double>{1, 2}, std::vector<double>{1, 0.5}));
}

TEST_CASE("counter-based streams")
{
    CounterRng a(7), b(7);
    for (int i = 0; i < 100; ++i)
        REQUIRE(a() == b());
    std::set<std::uint64_t> keys;
    for (std::uint64_t t = 0; t < 1000; ++t)
        keys.insert(trial_key(1, tag_of("wegner1"), t));
    CHECK(keys.size() == 1000);
    CHECK(trial_key(1, tag_of("wegner1"), 0) != trial_key(1, tag_of("wegner2"), 0));
    CHECK(tag_of("") == 0xcbf29ce484222325ULL);
    CHECK(tag_of("a") == 0xaf63dc4c8601ec8cULL);
    double sum = 0.0;
    CounterRng u(99);
    for (int i = 0; i < 100000; ++i) {
        const double x = u.uniform();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
        sum += x;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("parallel_for visits every index once and rethrows")
{
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(1000, 8, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits)
        REQUIRE(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(100, 4,
                                 [](std::size_t i) {
                                     if (i == 37)
                                         throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}
