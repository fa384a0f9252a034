#include "anderson/evc.hpp"

#include "anderson/parallel.hpp"
#include "anderson/random.hpp"
#include "anderson/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace anderson {

namespace {

void check_grid(const std::vector<double>& s_grid)
{
    if (s_grid.empty())
        throw std::invalid_argument("s grid is empty");
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        if (!std::isfinite(s_grid[i]) || s_grid[i] < 0.0)
            throw std::invalid_argument("s grid entries must be finite and >= 0");
        if (i > 0 && s_grid[i] <= s_grid[i - 1])
            throw std::invalid_argument("s grid must be strictly increasing");
    }
}

ModelSpec effective_spec(const ModelSpec& spec, const EvcOptions& opts)
{
    ModelSpec s = spec;
    if (!opts.interaction)
        s.interaction_amplitude = 0.0;
    return s;
}

std::vector<double> window_spectrum(const Cube& cube, const DisorderSample& sample, const ModelSpec& spec)
{
    return window_values(eigenvalues(assemble_hamiltonian(cube, sample, spec)), 0.0, spec.energy_window);
}

// Both inputs sorted ascending.
double spectra_distance(const std::vector<double>& a, const std::vector<double>& b)
{
    double best = std::numeric_limits<double>::infinity();
    std::size_t j = 0;
    for (double x : a) {
        while (j + 1 < b.size() && b[j + 1] <= x)
            ++j;
        for (std::size_t k = j; k < std::min(b.size(), j + 2); ++k)
            best = std::min(best, std::abs(x - b[k]));
    }
    return best;
}

void finish(EvcResult& r)
{
    try {
        r.slope = loglog_slope(r.s_grid, r.prob);
    } catch (const std::invalid_argument&) {
        r.slope.reset();
    }
    r.max_ratio = 0.0;
    for (std::size_t i = 0; i < r.s_grid.size(); ++i)
        if (r.s_grid[i] > 0.0)
            r.max_ratio = std::max(r.max_ratio, r.prob[i] / std::pow(r.s_grid[i], 2.0 / 3.0));
}

} // namespace

EvcResult tabulate_distances(std::vector<double> distances, const std::vector<double>& s_grid)
{
    check_grid(s_grid);
    EvcResult r;
    r.s_grid = s_grid;
    r.trials = distances.size();
    std::vector<double> sorted = distances;
    std::sort(sorted.begin(), sorted.end());
    for (double s : s_grid) {
        const auto k = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), s) - sorted.begin());
        const double p = r.trials ? static_cast<double>(k) / r.trials : 0.0;
        r.counts.push_back(k);
        r.prob.push_back(p);
        r.stderr_.push_back(binomial_stderr(p, r.trials));
    }
    r.distances = std::move(distances);
    finish(r);
    return r;
}

EvcResult wegner_one_volume(const Cube& cube, double energy, const ModelSpec& spec,
                            const std::vector<double>& s_grid, std::size_t trials, std::uint64_t seed,
                            const EvcOptions& opts)
{
    check_grid(s_grid);
    spec.validate();
    if (trials < std::max<std::size_t>(1, opts.min_trials))
        throw std::invalid_argument("one-volume experiment needs at least " + std::to_string(opts.min_trials) +
                                    " trials");
    if (energy < 0.0 || energy > spec.energy_window)
        throw std::invalid_argument("energy must lie in [0, E*]");
    const ModelSpec model = effective_spec(spec, opts);
    const auto region = cube.projection_sites();

    std::vector<double> dist(trials);
    parallel_for(trials, opts.workers, [&](std::size_t t) {
        auto sample = sample_disorder(region, trial_key(seed, tag_of("wegner1"), t), model);
        auto values = window_spectrum(cube, sample, model);
        double best = std::numeric_limits<double>::infinity();
        for (double v : values)
            best = std::min(best, std::abs(v - energy));
        dist[t] = best;
    });
    return tabulate_distances(std::move(dist), s_grid);
}

EvcResult wegner_two_volume(const Cube& cx, const Cube& cy, const ModelSpec& spec,
                            const std::vector<double>& s_grid, std::size_t trials, std::uint64_t seed,
                            const EvcOptions& opts)
{
    check_grid(s_grid);
    spec.validate();
    if (cx.radius() != cy.radius() || cx.particles() != cy.particles() || cx.dim() != cy.dim())
        throw std::invalid_argument("two-volume cubes must share N, d and L");
    const int n = cx.particles();
    const int l = cx.radius();
    if (sym_distance(cx.center(), cy.center()) <= 4 * n * l)
        throw PreconditionError("cubes are not 4NL-distant in the symmetrized distance");
    if (!weakly_separated(cx, cy))
        throw PreconditionError("no weak-separation certificate found for the cube pair");
    if (trials < std::max<std::size_t>(1, opts.min_trials))
        throw std::invalid_argument("two-volume experiment needs at least " + std::to_string(opts.min_trials) +
                                    " trials");
    const ModelSpec model = effective_spec(spec, opts);
    const auto region = scatterer_region({cx, cy});
    const auto region_x = cx.projection_sites();
    const auto region_y = cy.projection_sites();

    std::vector<double> dist(trials);
    parallel_for(trials, opts.workers, [&](std::size_t t) {
        std::vector<double> sx, sy;
        if (opts.shared_disorder) {
            auto sample = sample_disorder(region, trial_key(seed, tag_of("wegner2"), t), model);
            sx = window_spectrum(cx, sample, model);
            sy = window_spectrum(cy, sample, model);
        } else {
            auto a = sample_disorder(region_x, trial_key(seed, tag_of("wegner2/x"), t), model);
            auto b = sample_disorder(region_y, trial_key(seed, tag_of("wegner2/y"), t), model);
            sx = window_spectrum(cx, a, model);
            sy = window_spectrum(cy, b, model);
        }
        dist[t] = spectra_distance(sx, sy);
    });
    return tabulate_distances(std::move(dist), s_grid);
}

double two_thirds_constant(const EvcResult& r, double s_lo, double s_hi)
{
    double c = 0.0;
    for (std::size_t i = 0; i < r.s_grid.size(); ++i)
        if (r.s_grid[i] >= s_lo && r.s_grid[i] <= s_hi && r.s_grid[i] > 0.0)
            c = std::max(c, r.prob[i] / std::pow(r.s_grid[i], 2.0 / 3.0));
    return c;
}

std::size_t two_thirds_violations(const EvcResult& r, double c, double s_lo, double s_hi)
{
    std::size_t bad = 0;
    for (std::size_t i = 0; i < r.s_grid.size(); ++i)
        // Same ratio as the fitted constant, so the argmax never rounds into a violation.
        if (r.s_grid[i] >= s_lo && r.s_grid[i] <= s_hi && r.s_grid[i] > 0.0 &&
            r.prob[i] / std::pow(r.s_grid[i], 2.0 / 3.0) > c)
            ++bad;
    return bad;
}

std::vector<Site> shift_region(const Cube& cx, const Cube& cy, const WeakSeparation& cert)
{
    auto out = scatterer_region({cx, cy});
    auto q = cert.q.sites();
    out.insert(out.end(), q.begin(), q.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ShiftResult eigenvalue_shift_test(const Cube& cx, const Cube& cy, const WeakSeparation& cert,
                                  const DisorderSample& sample, const ModelSpec& spec, double c)
{
    if (!certificate_valid(cx, cy, cert))
        throw PreconditionError("weak-separation certificate is not valid for this cube pair");
    const auto q = cert.q.sites();
    if (!sample.covers(q))
        throw std::invalid_argument("disorder sample does not cover the separation box");

    ShiftResult out;
    const int big = static_cast<int>(cert.j1.size());
    const int small = static_cast<int>(cert.j2.size());
    out.n1 = cert.first_separated ? big : small;
    out.n2 = cert.first_separated ? small : big;

    const auto shifted = shift_amplitudes(sample, q, c);
    auto residual = [&](const Cube& cube, int count) {
        const auto before = eigenvalues(assemble_hamiltonian(cube, sample, spec));
        const auto after = eigenvalues(assemble_hamiltonian(cube, shifted, spec));
        const double expected = count * spec.disorder_coupling * c;
        return ((after - before).array() - expected).abs().maxCoeff();
    };
    out.residual_x = residual(cx, out.n1);
    out.residual_y = residual(cy, out.n2);
    return out;
}

} // namespace anderson
