#pragma once

// Reference computations written independently of the library code paths.
// They favour obviousness over speed.

#include "anderson/geometry.hpp"
#include "anderson/model.hpp"
#include "anderson/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

namespace oracle {

using anderson::Configuration;

inline int point_dist(const Configuration& x, int i, const Configuration& y, int j)
{
    int best = 0;
    for (int k = 0; k < x.dim(); ++k)
        best = std::max(best, std::abs(x.particle(i)[k] - y.particle(j)[k]));
    return best;
}

// min over all N! relabelings of max_j |x_{π(j)} - y_j|
inline int sym_distance(const Configuration& x, const Configuration& y)
{
    std::vector<int> perm(static_cast<std::size_t>(x.particles()));
    std::iota(perm.begin(), perm.end(), 0);
    int best = -1;
    do {
        int worst = 0;
        for (int j = 0; j < x.particles(); ++j)
            worst = std::max(worst, point_dist(x, perm[static_cast<std::size_t>(j)], y, j));
        if (best < 0 || worst < best)
            best = worst;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline int hausdorff(const Configuration& x, const Configuration& y)
{
    auto directed = [](const Configuration& a, const Configuration& b) {
        int sup = 0;
        for (int i = 0; i < a.particles(); ++i) {
            int inf = 1 << 30;
            for (int j = 0; j < b.particles(); ++j)
                inf = std::min(inf, point_dist(a, i, b, j));
            sup = std::max(sup, inf);
        }
        return sup;
    };
    return std::max(directed(x, y), directed(y, x));
}

// Dense H built straight from the definition: loop over every pair of cube
// points and connect those at l1 distance one.
inline Eigen::MatrixXd hamiltonian(const anderson::Cube& cube, const anderson::DisorderSample& sample,
                                   const anderson::ModelSpec& spec)
{
    const auto pts = cube.points();
    const auto n = static_cast<Eigen::Index>(pts.size());
    const int nd = static_cast<int>(cube.center().coords().size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    const double zeta = std::min(spec.interaction_exponent, 1.0);
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto& x = pts[static_cast<std::size_t>(a)];
        double diag = nd;
        for (int i = 0; i < x.particles(); ++i) {
            diag += spec.disorder_coupling * sample.amplitude(x.particle(i));
            for (int j = i + 1; j < x.particles(); ++j)
                diag += spec.interaction_amplitude * std::exp(-std::pow(point_dist(x, i, x, j), zeta));
        }
        h(a, a) = diag;
        for (Eigen::Index b = 0; b < n; ++b) {
            int l1 = 0;
            for (std::size_t k = 0; k < x.coords().size(); ++k)
                l1 += std::abs(x.coords()[k] - pts[static_cast<std::size_t>(b)].coords()[k]);
            if (l1 == 1)
                h(a, b) = -0.5;
        }
    }
    return h;
}

struct Ols {
    double slope;
    double intercept;
};

// Normal equations in closed form.
inline Ols ols(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

// Random configuration with coordinates in [-spread, spread].
inline Configuration random_configuration(anderson::CounterRng& rng, int particles, int dim, int spread)
{
    std::vector<int> c(static_cast<std::size_t>(particles * dim));
    for (auto& v : c)
        v = static_cast<int>(rng() % static_cast<std::uint64_t>(2 * spread + 1)) - spread;
    return Configuration(dim, std::move(c));
}

inline int uniform_int(anderson::CounterRng& rng, int lo, int hi)
{
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

} // namespace oracle
