#pragma once

// Eigenvalue-concentration experiments: one-volume and two-volume Wegner
// probabilities, and the exact eigenvalue shift under a uniform amplitude
// shift on a weak-separation box.

#include "anderson/geometry.hpp"
#include "anderson/model.hpp"
#include "anderson/stats.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace anderson {

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct EvcOptions {
    bool interaction = true;
    bool shared_disorder = true; // two-volume only
    int workers = 1;
    std::size_t min_trials = 500;
};

struct EvcResult {
    std::vector<double> s_grid;
    std::vector<std::size_t> counts;
    std::vector<double> prob;
    std::vector<double> stderr_;
    std::size_t trials = 0;
    // Per-trial distance, indexed by trial (infinite when the window is empty).
    std::vector<double> distances;
    std::optional<LinearFit> slope;
    // max over s > 0 of p(s) / s^{2/3}
    double max_ratio = 0.0;
};

// P{ dist(Σ^{I*}, E) <= s } over independent disorder samples.
EvcResult wegner_one_volume(const Cube& cube, double energy, const ModelSpec& spec,
                            const std::vector<double>& s_grid, std::size_t trials, std::uint64_t seed,
                            const EvcOptions& opts = {});

// P{ dist(Σ^{I*}_x, Σ^{I*}_y) <= s }, both spectra computed in one disorder
// world per trial unless opts.shared_disorder is false.
EvcResult wegner_two_volume(const Cube& cx, const Cube& cy, const ModelSpec& spec,
                            const std::vector<double>& s_grid, std::size_t trials, std::uint64_t seed,
                            const EvcOptions& opts = {});

// Builds the empirical table from per-trial distances.
EvcResult tabulate_distances(std::vector<double> distances, const std::vector<double>& s_grid);

// Smallest C with p(s) <= C s^{2/3} on the grid points inside [s_lo, s_hi].
double two_thirds_constant(const EvcResult& r, double s_lo, double s_hi);
// Grid points in [s_lo, s_hi] with p(s) > C s^{2/3}.
std::size_t two_thirds_violations(const EvcResult& r, double c, double s_lo, double s_hi);

struct ShiftResult {
    int n1 = 0; // particles of the first cube inside Q
    int n2 = 0; // particles of the second cube inside Q
    double residual_x = 0.0;
    double residual_y = 0.0;
    double max_residual() const { return residual_x > residual_y ? residual_x : residual_y; }
};

// Shifts every amplitude in Q by c and compares the eigenvalue displacement
// of each cube with (#particles in Q) * g * c.
ShiftResult eigenvalue_shift_test(const Cube& cx, const Cube& cy, const WeakSeparation& cert,
                                  const DisorderSample& sample, const ModelSpec& spec, double c);

// Scatterer sites needed by a shift test: both projections plus Q.
std::vector<Site> shift_region(const Cube& cx, const Cube& cy, const WeakSeparation& cert);

} // namespace anderson
