#pragma once

// Small statistics toolbox: least-squares fits and binomial errors.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace anderson {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double half_width = 0.0; // 95% confidence half-width of the slope
    double p_value = 1.0;    // two-sided test of slope == 0
    double r_squared = 0.0;
    std::size_t points = 0;
    std::vector<double> residuals;
};

// Ordinary least squares y = a + b x. Needs at least two distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Slope of log p against log s over the points with p_lo <= p <= p_hi.
LinearFit loglog_slope(std::span<const double> s, std::span<const double> p, double p_lo = 0.01,
                       double p_hi = 0.5);

double binomial_stderr(double p, std::size_t n);

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n, double z = 1.96);

// log v ≈ log A - ν R^κ, fitted by scanning κ and solving the linear problem.
struct StretchedExpFit {
    double nu = 0.0;
    double kappa = 0.0;
    double log_prefactor = 0.0;
    double rss = 0.0;
    std::vector<double> residuals;
};

StretchedExpFit fit_stretched_exponential(std::span<const double> r, std::span<const double> values,
                                          double kappa_lo = 0.05, double kappa_hi = 1.5,
                                          int kappa_steps = 291);

} // namespace anderson
