#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "anderson/evc.hpp"
#include "anderson/spectral.hpp"
#include "oracles.hpp"

using namespace anderson;

namespace {

Configuration c1(std::vector<int> xs) { return Configuration(1, std::move(xs)); }

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> g;
    for (int k = 0; k < n; ++k)
        g.push_back(std::pow(10.0, lo + (hi - lo) * k / (n - 1)));
    return g;
}

} // namespace

TEST_CASE("tabulated CDF matches direct counting")
{
    CounterRng rng(0xe1);
    std::vector<double> d;
    for (int i = 0; i < 997; ++i)
        d.push_back(rng.uniform() * rng.uniform());
    const auto grid = log_grid(-3, 0, 13);
    const auto r = tabulate_distances(d, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::size_t count = 0;
        for (double v : d)
            count += v <= grid[k];
        CHECK(r.counts[k] == count);
        CHECK(r.prob[k] == static_cast<double>(count) / 997.0);
        if (k > 0)
            CHECK(r.prob[k] >= r.prob[k - 1]);
    }
    CHECK_THROWS(tabulate_distances(d, {}));
    CHECK_THROWS(tabulate_distances(d, {0.1, 0.1}));
}

TEST_CASE("two-thirds constant and violations")
{
    EvcResult r;
    r.s_grid = {1e-4, 1e-3, 1e-2, 1e-1};
    r.prob = {1e-3, 2e-3, 0.05, 0.2};
    const double c = two_thirds_constant(r, 1e-2, 1e-1);
    CHECK(c == doctest::Approx(std::max(0.05 / std::pow(1e-2, 2.0 / 3), 0.2 / std::pow(1e-1, 2.0 / 3))));
    CHECK(two_thirds_violations(r, c, 1e-4, 1e-1) == 0);
    CHECK(two_thirds_violations(r, 0.5, 1e-4, 1e-1) == 2);
}

TEST_CASE("one-volume edge cases")
{
    ModelSpec spec;
    Cube cube(c1({0}), 3);
    EvcOptions o;
    o.min_trials = 1;
    auto r = wegner_one_volume(cube, 0.5, spec, {0.0, 100.0}, 50, 1, o);
    CHECK(r.prob[0] == 0.0);
    CHECK(r.prob[1] == 1.0);
    CHECK_THROWS(wegner_one_volume(cube, 0.5, spec, {0.1}, 10, 1));
    CHECK_THROWS(wegner_one_volume(cube, 5.0, spec, {0.1}, 600, 1));
    CHECK_THROWS(wegner_one_volume(cube, 0.5, spec, {0.2, 0.1}, 600, 1));
}

TEST_CASE("one-volume slope is near linear")
{
    ModelSpec spec;
    auto r = wegner_one_volume(Cube(c1({0}), 8), 0.5, spec, log_grid(-4, 0, 41), 2000, 11);
    REQUIRE(r.slope);
    CHECK(r.slope->slope >= 0.9);
}

TEST_CASE("doubling trials moves the CDF by at most three standard errors")
{
    ModelSpec spec;
    const auto grid = log_grid(-3, 0, 16);
    auto a = wegner_one_volume(Cube(c1({0}), 4), 0.5, spec, grid, 600, 21);
    auto b = wegner_one_volume(Cube(c1({0}), 4), 0.5, spec, grid, 1200, 21);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double se = std::sqrt(a.stderr_[k] * a.stderr_[k] + b.stderr_[k] * b.stderr_[k]);
        CHECK(std::abs(a.prob[k] - b.prob[k]) <= 3 * se + 1e-12);
    }
}

TEST_CASE("two-volume preconditions")
{
    ModelSpec spec;
    spec.particles = 2;
    const auto grid = log_grid(-3, -1, 5);
    CHECK_THROWS_AS(wegner_two_volume(Cube(c1({0, 0}), 4), Cube(c1({0, 10}), 4), spec, grid, 600, 1),
                    PreconditionError);
    // Spectra are restricted to I* = [0, E*]; a wide window keeps both nonempty.
    spec.energy_window = 1000.0;
    auto r = wegner_two_volume(Cube(c1({0, 0}), 4), Cube(c1({0, 40}), 4), spec, {1e-3, 1000.0}, 600, 2);
    CHECK(r.prob[1] == 1.0);
}

TEST_CASE("far-apart cubes: shared and independent worlds agree")
{
    // Clustered pairs 400 apart are >9NL-distant, so shared disorder is
    // independent and the two CDFs must agree within Monte Carlo error.
    ModelSpec spec;
    spec.particles = 2;
    const auto grid = log_grid(-3, 0, 10);
    Cube cx(c1({0, 1}), 2), cy(c1({400, 401}), 2);
    EvcOptions shared, indep;
    indep.shared_disorder = false;
    auto a = wegner_two_volume(cx, cy, spec, grid, 1500, 31, shared);
    auto b = wegner_two_volume(cx, cy, spec, grid, 1500, 32, indep);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double se = std::sqrt(a.stderr_[k] * a.stderr_[k] + b.stderr_[k] * b.stderr_[k]);
        CHECK(std::abs(a.prob[k] - b.prob[k]) <= 4 * se + 1e-12);
    }
}

TEST_CASE("eigenvalue shift examples")
{
    SUBCASE("single particle, c = 0.1")
    {
        ModelSpec spec;
        Cube cx(c1({0}), 3), cy(c1({100}), 3);
        auto cert = weakly_separated(cx, cy);
        REQUIRE(cert);
        auto sample = sample_disorder(shift_region(cx, cy, *cert), 5, spec);
        auto r = eigenvalue_shift_test(cx, cy, *cert, sample, spec, 0.1);
        CHECK(r.n1 == 1);
        CHECK(r.n2 == 0);
        CHECK(r.max_residual() < 1e-9);

        // Direct oracle: eigenvalues of x move by 0.1, those of y stay.
        auto moved = shift_amplitudes(sample, cert->q.sites(), 0.1);
        auto ex0 = eigenvalues(assemble_hamiltonian(cx, sample, spec));
        auto ex1 = eigenvalues(assemble_hamiltonian(cx, moved, spec));
        auto ey0 = eigenvalues(assemble_hamiltonian(cy, sample, spec));
        auto ey1 = eigenvalues(assemble_hamiltonian(cy, moved, spec));
        CHECK((ex1 - ex0).array().abs().maxCoeff() == doctest::Approx(0.1).epsilon(1e-9));
        CHECK((ex1 - ex0).array().minCoeff() == doctest::Approx(0.1).epsilon(1e-9));
        CHECK((ey1 - ey0).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("two particles, n1 = 2, n2 = 1, g = 2")
    {
        ModelSpec spec;
        spec.particles = 2;
        spec.disorder_coupling = 2.0;
        Cube cx(c1({0, 0}), 2), cy(c1({0, 60}), 2);
        auto cert = weakly_separated(cx, cy);
        REQUIRE(cert);
        auto sample = sample_disorder(shift_region(cx, cy, *cert), 6, spec);
        auto r = eigenvalue_shift_test(cx, cy, *cert, sample, spec, 0.05);
        CHECK(r.n1 == 2);
        CHECK(r.n2 == 1);
        CHECK(r.max_residual() < 1e-9);
        auto moved = shift_amplitudes(sample, cert->q.sites(), 0.05);
        const Eigen::VectorXd dx = eigenvalues(assemble_hamiltonian(cx, moved, spec)) - eigenvalues(assemble_hamiltonian(cx, sample, spec));
        const Eigen::VectorXd dy = eigenvalues(assemble_hamiltonian(cy, moved, spec)) - eigenvalues(assemble_hamiltonian(cy, sample, spec));
        CHECK(dx.minCoeff() == doctest::Approx(0.2).epsilon(1e-9));
        CHECK(dx.maxCoeff() == doctest::Approx(0.2).epsilon(1e-9));
        CHECK(dy.minCoeff() == doctest::Approx(0.1).epsilon(1e-9));
        CHECK(dy.maxCoeff() == doctest::Approx(0.1).epsilon(1e-9));
    }
    SUBCASE("c = 0 and invalid certificates")
    {
        ModelSpec spec;
        Cube cx(c1({0}), 3), cy(c1({100}), 3);
        auto cert = *weakly_separated(cx, cy);
        auto sample = sample_disorder(shift_region(cx, cy, cert), 5, spec);
        CHECK(eigenvalue_shift_test(cx, cy, cert, sample, spec, 0.0).max_residual() == 0.0);
        auto bad = cert;
        bad.q = Box{{-1}, {1}};
        CHECK_THROWS(eigenvalue_shift_test(cx, cy, bad, sample, spec, 0.1));
    }
}

TEST_CASE("shift identity on random certified pairs")
{
    CounterRng rng(0xe2);
    int done = 0;
    while (done < 100) {
        ModelSpec spec;
        spec.particles = oracle::uniform_int(rng, 1, 2);
        spec.disorder_coupling = rng.uniform(0.5, 3.0);
        const int l = oracle::uniform_int(rng, 1, 6);
        Cube cx(oracle::random_configuration(rng, spec.particles, 1, 40), l);
        Cube cy(oracle::random_configuration(rng, spec.particles, 1, 40), l);
        auto cert = weakly_separated(cx, cy);
        if (!cert)
            continue;
        ++done;
        auto sample = sample_disorder(shift_region(cx, cy, *cert), rng(), spec);
        REQUIRE(eigenvalue_shift_test(cx, cy, *cert, sample, spec, rng.uniform(-0.5, 0.5)).max_residual() < 1e-9);
    }
}
