#include "anderson/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace anderson {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("linear_fit: x and y differ in length");
    const std::size_t n = x.size();
    if (n < 2)
        throw std::invalid_argument("linear_fit: need at least two points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("linear_fit: x values are all equal");

    LinearFit fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    fit.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
        rss += fit.residuals[i] * fit.residuals[i];
    }
    fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;

    if (n > 2) {
        const double dof = static_cast<double>(n - 2);
        fit.slope_stderr = std::sqrt(rss / dof / sxx);
        boost::math::students_t dist(dof);
        fit.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * fit.slope_stderr;
        if (fit.slope_stderr > 0.0) {
            const double t = std::abs(fit.slope) / fit.slope_stderr;
            fit.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
        } else {
            fit.p_value = fit.slope == 0.0 ? 1.0 : 0.0;
        }
    } else {
        fit.slope_stderr = std::numeric_limits<double>::infinity();
        fit.half_width = std::numeric_limits<double>::infinity();
    }
    return fit;
}

LinearFit loglog_slope(std::span<const double> s, std::span<const double> p, double p_lo, double p_hi)
{
    if (s.size() != p.size())
        throw std::invalid_argument("loglog_slope: s and p differ in length");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] > 0.0 && p[i] > 0.0 && p[i] >= p_lo && p[i] <= p_hi) {
            lx.push_back(std::log(s[i]));
            ly.push_back(std::log(p[i]));
        }
    if (lx.size() < 2)
        throw std::invalid_argument("loglog_slope: fewer than two points in the fitting window");
    return linear_fit(lx, ly);
}

double binomial_stderr(double p, std::size_t n)
{
    if (n == 0)
        return 0.0;
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n, double z)
{
    if (n == 0)
        return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = successes / nn;
    const double z2 = z * z;
    const double center = (p + z2 / (2 * nn)) / (1 + z2 / nn);
    const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

StretchedExpFit fit_stretched_exponential(std::span<const double> r, std::span<const double> values,
                                          double kappa_lo, double kappa_hi, int kappa_steps)
{
    if (r.size() != values.size())
        throw std::invalid_argument("stretched-exponential fit: length mismatch");
    std::vector<double> rr, lv;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] > 0.0 && values[i] > 0.0) {
            rr.push_back(r[i]);
            lv.push_back(std::log(values[i]));
        }
    if (rr.size() < 3)
        throw std::invalid_argument("stretched-exponential fit: need three positive points");
    if (kappa_steps < 2 || !(kappa_lo > 0.0) || !(kappa_hi > kappa_lo))
        throw std::invalid_argument("stretched-exponential fit: bad kappa grid");

    StretchedExpFit best;
    best.rss = std::numeric_limits<double>::infinity();
    std::vector<double> xk(rr.size());
    for (int step = 0; step < kappa_steps; ++step) {
        const double kappa = kappa_lo + (kappa_hi - kappa_lo) * step / (kappa_steps - 1);
        for (std::size_t i = 0; i < rr.size(); ++i)
            xk[i] = std::pow(rr[i], kappa);
        auto fit = linear_fit(xk, lv);
        double rss = 0.0;
        for (double e : fit.residuals)
            rss += e * e;
        if (rss < best.rss) {
            best.rss = rss;
            best.kappa = kappa;
            best.nu = -fit.slope;
            best.log_prefactor = fit.intercept;
            best.residuals = fit.residuals;
        }
    }
    return best;
}

} // namespace anderson
