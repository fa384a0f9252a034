#include "anderson/model.hpp"

#include "anderson/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace anderson {

void ModelSpec::validate() const
{
    if (particles < 1)
        throw ModelError("model needs at least one particle");
    if (dim < 1)
        throw ModelError("model dimension must be >= 1");
    if (!std::isfinite(interaction_amplitude) || interaction_amplitude < 0.0)
        throw ModelError("interaction amplitude C_U must be finite and >= 0");
    if (!std::isfinite(interaction_exponent) || interaction_exponent <= 0.0)
        throw ModelError("interaction exponent must be positive");
    if (!std::isfinite(disorder_coupling) || disorder_coupling <= 0.0)
        throw ModelError("disorder coupling g must be positive");
    if (!std::isfinite(amplitude_support) || amplitude_support <= 0.0)
        throw ModelError("amplitude support c_V must be positive");
    if (!std::isfinite(energy_window) || energy_window <= 0.0)
        throw ModelError("energy window E* must be positive");
    if (mesh_refinement != 1)
        throw ModelError("mesh refinement other than 1 is not supported");
}

UniformLaw::UniformLaw(double support) : support_(support)
{
    if (!(support > 0.0))
        throw ModelError("uniform law needs a positive support");
}

DisorderSample::DisorderSample(std::map<Site, double> amplitudes, std::uint64_t seed, double support)
    : amplitudes_(std::move(amplitudes)), seed_(seed), support_(support)
{
}

double DisorderSample::amplitude(std::span<const int> site) const
{
    auto it = amplitudes_.find(Site(site.begin(), site.end()));
    if (it == amplitudes_.end()) {
        std::string s = "(";
        for (std::size_t k = 0; k < site.size(); ++k)
            s += (k ? "," : "") + std::to_string(site[k]);
        throw ModelError("site " + s + ") lies outside the sampled region");
    }
    return it->second;
}

bool DisorderSample::contains(std::span<const int> site) const
{
    return amplitudes_.contains(Site(site.begin(), site.end()));
}

bool DisorderSample::covers(const std::vector<Site>& sites) const
{
    return std::all_of(sites.begin(), sites.end(), [&](const Site& s) { return amplitudes_.contains(s); });
}

void DisorderSample::set(const Site& site, double value)
{
    amplitudes_[site] = value;
    planted_ = true;
}

double site_uniform(std::uint64_t seed, std::span<const int> site)
{
    return to_unit(combine(mix64(seed), site));
}

DisorderSample sample_disorder(const std::vector<Site>& region, std::uint64_t seed, const AmplitudeLaw& law)
{
    if (region.empty())
        throw ModelError("cannot sample disorder on an empty region");
    std::map<Site, double> amps;
    for (const auto& site : region)
        amps.emplace(site, law.quantile(site_uniform(seed, site)));
    return DisorderSample(std::move(amps), seed, law.upper());
}

DisorderSample sample_disorder(const std::vector<Site>& region, std::uint64_t seed, const ModelSpec& spec)
{
    return sample_disorder(region, seed, UniformLaw(spec.amplitude_support));
}

std::vector<Site> scatterer_region(const std::vector<Cube>& cubes)
{
    std::vector<Site> out;
    for (const auto& cube : cubes) {
        auto s = cube.projection_sites();
        out.insert(out.end(), s.begin(), s.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double potential_value(const Configuration& x, const DisorderSample& sample, const ModelSpec& spec)
{
    double v = 0.0;
    for (int j = 0; j < x.particles(); ++j)
        v += sample.amplitude(x.particle(j));
    return spec.disorder_coupling * v;
}

double interaction_value(const Configuration& x, const ModelSpec& spec)
{
    if (spec.interaction_amplitude == 0.0)
        return 0.0;
    const double zeta = spec.effective_exponent();
    double u = 0.0;
    for (int i = 0; i < x.particles(); ++i)
        for (int j = i + 1; j < x.particles(); ++j) {
            const double r = site_distance(x.particle(i), x.particle(j));
            u += spec.interaction_amplitude * std::exp(-std::pow(r, zeta));
        }
    return u;
}

Eigen::SparseMatrix<double> kinetic_matrix(const Cube& cube)
{
    const std::size_t n = cube.volume();
    const std::size_t nd = cube.center().coords().size();
    const auto side = static_cast<std::size_t>(cube.side());

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(n * (2 * nd + 1));
    for (std::size_t i = 0; i < n; ++i) {
        triplets.emplace_back(i, i, static_cast<double>(nd));
        // Mixed-radix digits: coordinate k has stride side^(nd-1-k).
        std::size_t stride = 1;
        for (std::size_t k = nd; k-- > 0;) {
            const std::size_t digit = (i / stride) % side;
            if (digit + 1 < side)
                triplets.emplace_back(i, i + stride, -0.5);
            if (digit > 0)
                triplets.emplace_back(i, i - stride, -0.5);
            stride *= side;
        }
    }
    Eigen::SparseMatrix<double> k(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    k.setFromTriplets(triplets.begin(), triplets.end());
    return k;
}

HamiltonianMatrix assemble_hamiltonian(const Cube& cube, const DisorderSample& sample, const ModelSpec& spec)
{
    spec.validate();
    if (cube.particles() != spec.particles || cube.dim() != spec.dim)
        throw ModelError("cube shape does not match the model (N, d)");
    if (!sample.covers(cube.projection_sites()))
        throw ModelError("disorder region too small for cube centered at " + cube.center().to_string());

    HamiltonianMatrix h;
    h.cube = cube;
    h.kinetic = kinetic_matrix(cube);
    const auto n = static_cast<Eigen::Index>(cube.volume());
    h.interaction.resize(n);
    h.potential.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto x = cube.point(static_cast<std::size_t>(i));
        h.interaction[i] = interaction_value(x, spec);
        h.potential[i] = potential_value(x, sample, spec);
    }
    return h;
}

Eigen::MatrixXd HamiltonianMatrix::dense() const
{
    Eigen::MatrixXd m = Eigen::MatrixXd(kinetic);
    m.diagonal() += interaction + potential;
    return m;
}

SampleMean sample_mean_decompose(const DisorderSample& sample, const std::vector<Site>& q)
{
    if (q.empty())
        throw ModelError("sample mean over an empty set");
    SampleMean out;
    double sum = 0.0;
    for (const auto& site : q)
        sum += sample.amplitude(site);
    out.mean = sum / static_cast<double>(q.size());
    for (const auto& site : q)
        out.fluctuations[site] = sample.amplitude(site) - out.mean;
    return out;
}

DisorderSample shift_amplitudes(const DisorderSample& sample, const std::vector<Site>& q, double c)
{
    auto amps = sample.amplitudes();
    for (const auto& site : q) {
        auto it = amps.find(site);
        if (it == amps.end())
            throw ModelError("shift region leaves the sampled region");
        it->second += c;
    }
    return DisorderSample(std::move(amps), sample.seed(), sample.support());
}

std::vector<double> modulus_experiment(int q_size, const std::vector<double>& s_grid, int trials,
                                       std::uint64_t seed, const AmplitudeLaw& law)
{
    if (q_size < 1)
        throw ModelError("|Q| must be >= 1");
    if (trials < 1000)
        throw ModelError("modulus experiment needs at least 1000 trials");
    std::vector<double> means(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        CounterRng rng(trial_key(seed, tag_of("modulus"), static_cast<std::uint64_t>(t)));
        double sum = 0.0;
        for (int i = 0; i < q_size; ++i)
            sum += law.quantile(rng.uniform());
        means[static_cast<std::size_t>(t)] = sum / q_size;
    }
    std::sort(means.begin(), means.end());

    std::vector<double> out;
    out.reserve(s_grid.size());
    for (double s : s_grid) {
        if (s <= 0.0) {
            out.push_back(0.0);
            continue;
        }
        // Largest number of sample means inside a window [t, t + s).
        std::size_t best = 0, hi = 0;
        for (std::size_t lo = 0; lo < means.size(); ++lo) {
            hi = std::max(hi, lo);
            while (hi < means.size() && means[hi] < means[lo] + s)
                ++hi;
            best = std::max(best, hi - lo);
        }
        out.push_back(static_cast<double>(best) / trials);
    }
    return out;
}

} // namespace anderson
