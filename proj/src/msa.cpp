#include "anderson/msa.hpp"

#include "anderson/parallel.hpp"
#include "anderson/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace anderson {

// ---------------------------------------------------------------------------
// Parameters

long long ScaleParams::scale(int k) const
{
    long long l = initial_scale;
    for (int i = 0; i < k; ++i)
        l *= growth;
    return l;
}

double ScaleParams::mass_n(int n) const
{
    return mass * std::pow(1.0 + 4.0 * std::pow(static_cast<double>(initial_scale), beta - delta),
                           max_particles - n);
}

double ScaleParams::nu_n(int n) const
{
    return nu * std::pow(2.0 * std::pow(static_cast<double>(growth), kappa), max_particles - n);
}

bool ParamReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const ConstraintCheck& c) { return c.passed; });
}

std::vector<std::string> ParamReport::failures() const
{
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.passed)
            out.push_back(c.name + ": " + c.detail);
    return out;
}

int minimal_growth(int max_particles, double delta)
{
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0, 1)");
    const double power = std::pow(12.0, 1.0 / (1.0 - delta));
    return std::max(24 * max_particles, static_cast<int>(std::ceil(power)));
}

ParamReport validate_params(const ScaleParams& p)
{
    ParamReport r;
    auto add = [&](std::string name, bool passed, std::string detail) {
        r.checks.push_back({std::move(name), passed, std::move(detail)});
    };
    std::ostringstream os;

    add("max_particles", p.max_particles >= 2, "N* = " + std::to_string(p.max_particles) + " (need >= 2)");
    add("initial_scale", p.initial_scale >= 1, "L0 = " + std::to_string(p.initial_scale) + " (need >= 1)");
    add("mass", p.mass >= 1.0, "m* = " + std::to_string(p.mass) + " (need >= 1)");
    add("nu", p.nu > 0.0, "nu* = " + std::to_string(p.nu) + " (need > 0)");
    add("energy_window", p.energy_window > 0.0, "E* = " + std::to_string(p.energy_window) + " (need > 0)");

    const double cap = std::min(p.zeta, 1.0);
    const bool ordered = 0.0 < p.kappa && p.kappa < p.beta && p.beta < p.delta && p.delta < cap;
    os << "kappa=" << p.kappa << " beta=" << p.beta << " delta=" << p.delta << " min(zeta,1)=" << cap;
    add("exponent_order", ordered, os.str());

    if (p.delta > 0.0 && p.delta < 1.0 && p.max_particles >= 1) {
        r.minimal_growth = minimal_growth(p.max_particles, p.delta);
        add("growth", p.growth >= r.minimal_growth,
            "Y = " + std::to_string(p.growth) + ", minimum " + std::to_string(r.minimal_growth));
    } else {
        add("growth", false, "minimum Y undefined for delta outside (0, 1)");
    }

    for (int n = 1; n <= p.max_particles; ++n) {
        r.masses.push_back(p.mass_n(n));
        r.nus.push_back(p.nu_n(n));
    }
    return r;
}

ParamReport check_params(const ScaleParams& p, ParamMode mode)
{
    auto r = validate_params(p);
    if (mode == ParamMode::Strict && !r.ok()) {
        std::string msg = "scale parameters violate constraints:";
        for (const auto& f : r.failures())
            msg += " [" + f + "]";
        throw std::invalid_argument(msg);
    }
    return r;
}

std::vector<long long> scale_sequence(const ScaleParams& p, int count)
{
    std::vector<long long> out;
    for (int k = 0; k < count; ++k)
        out.push_back(p.scale(k));
    return out;
}

NsParams ns_params(const ScaleParams& p, int n, double c_gri)
{
    return {p.delta, p.mass_n(n), c_gri};
}

// ---------------------------------------------------------------------------
// Singularity statistics

namespace {

Configuration origin(int n, int d)
{
    return Configuration(d, std::vector<int>(static_cast<std::size_t>(n * d), 0));
}

} // namespace

SingularityEstimate estimate_singularity_prob(int n, int k, double energy, const ScaleParams& p,
                                              const ModelSpec& spec, std::size_t trials, std::uint64_t seed,
                                              double c_gri, int workers)
{
    if (n < 1 || n > p.max_particles)
        throw std::invalid_argument("particle number must lie in 1..N*");
    if (trials == 0)
        throw std::invalid_argument("need at least one trial");
    const long long lk = p.scale(k);
    if (lk > 64)
        throw std::invalid_argument("scale L_k too large for a dense eigensolve");

    ModelSpec model = spec;
    model.particles = n;
    const Cube cube(origin(n, spec.dim), static_cast<int>(lk));
    const auto region = cube.projection_sites();
    const NsParams ns = ns_params(p, n, c_gri);

    std::vector<char> singular(trials, 0);
    parallel_for(trials, workers, [&](std::size_t t) {
        auto sample = sample_disorder(region, trial_key(seed, tag_of("ss-prob"), t), model);
        singular[t] = classify_ns(assemble_hamiltonian(cube, sample, model), energy, ns) == Singularity::S;
    });

    SingularityEstimate out;
    out.trials = trials;
    out.radius = static_cast<int>(lk);
    out.singular = static_cast<std::size_t>(std::count(singular.begin(), singular.end(), 1));
    out.p_hat = static_cast<double>(out.singular) / trials;
    std::tie(out.ci_lo, out.ci_hi) = wilson_interval(out.singular, trials);
    out.bound = std::exp(-p.nu_n(n) * std::pow(static_cast<double>(lk), p.kappa));
    return out;
}

// ---------------------------------------------------------------------------
// Bad and good cubes

BadGoodResult classify_bad_good(const Cube& big, double energy, int lk, const NsParams& ns,
                                const DisorderSample& sample, const ModelSpec& spec)
{
    const int l1 = big.radius();
    if (lk < 1 || lk >= l1)
        throw std::invalid_argument("need 1 <= L_k < L_{k+1}");
    BadGoodResult out;
    out.stride = l1 <= 32 ? 1 : lk;

    const int n = big.particles();
    const int reach = l1 - lk;
    const auto nd = big.center().coords().size();
    const int steps = 2 * (reach / out.stride) + 1;
    std::size_t total = 1;
    for (std::size_t k = 0; k < nd; ++k)
        total *= static_cast<std::size_t>(steps);

    std::vector<Cube> si_singular;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<int> c = big.center().coords();
        std::size_t rest = idx;
        for (std::size_t k = nd; k-- > 0;) {
            const int digit = static_cast<int>(rest % static_cast<std::size_t>(steps));
            rest /= static_cast<std::size_t>(steps);
            c[k] += (digit - reach / out.stride) * out.stride;
        }
        Cube sub(Configuration(big.dim(), std::move(c)), lk);
        ++out.scanned;
        if (classify_ns(assemble_hamiltonian(sub, sample, spec), energy, ns) == Singularity::NS)
            continue;
        ++out.singular;
        if (classify_wi_si(sub) == Interactivity::Weak) {
            out.good = false;
            out.kind = WitnessKind::WeaklyInteractive;
            out.witness = {sub};
            return out;
        }
        for (const auto& other : si_singular)
            if (sym_distance(other.center(), sub.center()) > 9 * n * lk) {
                out.good = false;
                out.kind = WitnessKind::DistantPair;
                out.witness = {other, sub};
                return out;
            }
        si_singular.push_back(std::move(sub));
    }
    return out;
}

ImplicationRecord implication_check(const Cube& big, double energy, int lk, const NsParams& ns, double beta,
                                    const DisorderSample& sample, const ModelSpec& spec)
{
    ImplicationRecord rec;
    rec.good = classify_bad_good(big, energy, lk, ns, sample, spec).good;
    auto h = assemble_hamiltonian(big, sample, spec);
    const auto values = eigenvalues(h);
    rec.non_resonant = classify_nr(values, energy, big.radius(), beta) == Resonance::NR;
    rec.threshold = ns_threshold(big.radius(), ns);
    if (spectral_distance(values, energy) <= kResonanceGap) {
        rec.dnorm = std::numeric_limits<double>::infinity();
        rec.non_singular = false;
        return rec;
    }
    rec.dnorm = dnorm(h, energy);
    rec.non_singular = classify_ns_from_dnorm(big, rec.dnorm, ns) == Singularity::NS;
    return rec;
}

// ---------------------------------------------------------------------------
// Dominated decay

DominationReport verify_domination(const Cube& big, double energy, int ell, const NsParams& ns, double beta,
                                   const DisorderSample& sample, const ModelSpec& spec)
{
    const int l = big.radius();
    if (ell < 1 || ell + 3 > l)
        throw std::invalid_argument("need 1 <= ℓ <= L - 3");

    DominationReport rep;
    const double lb = std::pow(static_cast<double>(l), beta);
    const double ld = std::pow(static_cast<double>(ell), ns.delta);
    rep.mass_condition =
        ns.mass * ld > 2.0 * lb && 2.0 * lb > lb + std::log(static_cast<double>(big.volume()));
    rep.reduced_mass = ns.mass - 2.0 * lb / ld;
    rep.q = std::exp(-rep.reduced_mass * ld);
    rep.ns_threshold = ns_threshold(l, ns);

    auto h = assemble_hamiltonian(big, sample, spec);
    Eigen::MatrixXd g;
    try {
        g = resolvent(h, energy);
    } catch (const ResonantEnergy&) {
        rep.cnr = false;
        return rep;
    }
    rep.cnr = classify_cnr(sample, spec, energy, big.center(), ell, l, beta);

    const auto u = static_cast<Eigen::Index>(big.center_index());
    Eigen::Index y = -1;
    for (auto z : big.boundary_indices()) {
        const auto zi = static_cast<Eigen::Index>(z);
        if (y < 0 || std::abs(g(zi, u)) > rep.dnorm) {
            rep.dnorm = std::abs(g(zi, u));
            y = zi;
        }
    }
    rep.ns = classify_ns_from_dnorm(big, rep.dnorm, ns) == Singularity::NS;

    GraphFunction gf;
    gf.graph = lattice_graph(big);
    gf.center = static_cast<int>(u);
    gf.radius = l - 1;
    gf.scale = ell + 1;
    gf.q = rep.q > 0.0 && std::isfinite(rep.q) ? rep.q : 1.0;
    gf.values.resize(big.volume());
    for (std::size_t x = 0; x < big.volume(); ++x)
        gf.values[x] = std::abs(g(y, static_cast<Eigen::Index>(x)));

    const int inner = gf.radius - gf.scale;
    std::vector<int> candidates;
    for (std::size_t x = 0; x < big.volume(); ++x) {
        const auto pt = big.point(x);
        if (max_norm(pt, big.center()) > inner)
            continue;
        Cube sub(pt, ell);
        if (classify_ns(assemble_hamiltonian(sub, sample, spec), energy, ns) == Singularity::S) {
            gf.singular.push_back(static_cast<int>(x));
            rep.singular_points.push_back(pt);
        } else {
            candidates.push_back(static_cast<int>(x));
        }
    }

    DominationContext ctx(gf);
    for (int x : candidates) {
        ++rep.checked;
        if (gf.values[static_cast<std::size_t>(x)] > gf.q * ctx.ball_max(x, gf.scale))
            ++rep.regular_failures;
    }
    rep.predicate = ctx.dominated();
    auto cover = tight_cover(ctx);
    if (gf.q < 1.0 && cover_width(cover) <= gf.radius - gf.scale)
        rep.bound = dominated_bound(gf, cover);
    return rep;
}

// ---------------------------------------------------------------------------
// Weakly interactive cubes

WiTensorReport wi_tensor_check(const Cube& cube, const DisorderSample& sample, const ModelSpec& spec,
                               const std::vector<double>& energies)
{
    WiTensorReport rep;
    rep.cluster = wi_decompose(cube);
    const int n = cube.particles();
    const int d = cube.dim();
    const int l = cube.radius();
    std::vector<int> rest;
    for (int j = 0; j < n; ++j)
        if (!std::binary_search(rep.cluster.begin(), rep.cluster.end(), j))
            rest.push_back(j);

    auto project = [&](const Configuration& x, const std::vector<int>& idx) {
        std::vector<int> c;
        for (int j : idx) {
            auto p = x.particle(j);
            c.insert(c.end(), p.begin(), p.end());
        }
        return Configuration(d, std::move(c));
    };
    const Cube c1(project(cube.center(), rep.cluster), l);
    const Cube c2(project(cube.center(), rest), l);
    ModelSpec s1 = spec, s2 = spec;
    s1.particles = static_cast<int>(rep.cluster.size());
    s2.particles = static_cast<int>(rest.size());

    const Eigen::MatrixXd h = assemble_hamiltonian(cube, sample, spec).dense();
    const Eigen::MatrixXd h1 = assemble_hamiltonian(c1, sample, s1).dense();
    const Eigen::MatrixXd h2 = assemble_hamiltonian(c2, sample, s2).dense();
    const auto n1 = h1.rows(), n2 = h2.rows();
    const auto total = static_cast<Eigen::Index>(cube.volume());

    std::vector<Eigen::Index> first(static_cast<std::size_t>(total)), second(static_cast<std::size_t>(total));
    const double zeta = spec.effective_exponent();
    for (Eigen::Index i = 0; i < total; ++i) {
        const auto x = cube.point(static_cast<std::size_t>(i));
        first[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(*c1.index_of(project(x, rep.cluster)));
        second[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(*c2.index_of(project(x, rest)));
        double cross = 0.0;
        for (int a : rep.cluster)
            for (int b : rest)
                cross += spec.interaction_amplitude *
                         std::exp(-std::pow(static_cast<double>(site_distance(x.particle(a), x.particle(b))), zeta));
        rep.cross_interaction_max = std::max(rep.cross_interaction_max, cross);
    }

    Eigen::MatrixXd hni = Eigen::MatrixXd::Zero(total, total);
    for (Eigen::Index i = 0; i < total; ++i)
        for (Eigen::Index k = 0; k < total; ++k) {
            const auto a = first[static_cast<std::size_t>(i)], ak = first[static_cast<std::size_t>(k)];
            const auto b = second[static_cast<std::size_t>(i)], bk = second[static_cast<std::size_t>(k)];
            double v = 0.0;
            if (b == bk)
                v += h1(a, ak);
            if (a == ak)
                v += h2(b, bk);
            hni(i, k) = v;
        }
    rep.cross_norm = (h - hni).cwiseAbs().maxCoeff();

    int gap = std::numeric_limits<int>::max();
    for (int a : rep.cluster)
        for (int b : rest)
            gap = std::min(gap, site_distance(cube.center().particle(a), cube.center().particle(b)));
    rep.gap = std::max(0, gap - 2 * l);
    const double pairs = n * (n - 1) / 2.0;
    rep.gap_bound = spec.interaction_amplitude * pairs * std::exp(-std::pow(static_cast<double>(rep.gap), zeta));
    rep.scale_bound =
        spec.interaction_amplitude * n * n / 2.0 * std::exp(-std::pow(static_cast<double>(l), zeta));

    const Eigen::VectorXd e = eigenvalues(h);
    const Eigen::VectorXd eni = eigenvalues(hni);
    const Eigen::VectorXd e1 = eigenvalues(h1);
    const Eigen::VectorXd e2 = eigenvalues(h2);
    std::vector<double> sums;
    sums.reserve(static_cast<std::size_t>(n1 * n2));
    for (Eigen::Index a = 0; a < n1; ++a)
        for (Eigen::Index b = 0; b < n2; ++b)
            sums.push_back(e1[a] + e2[b]);
    std::sort(sums.begin(), sums.end());
    for (Eigen::Index j = 0; j < total; ++j)
        rep.sum_residual = std::max(rep.sum_residual, std::abs(eni[j] - sums[static_cast<std::size_t>(j)]));

    std::vector<double> grid = energies;
    if (grid.empty())
        for (int k = 0; k <= 10; ++k)
            grid.push_back(spec.energy_window * k / 10.0);
    rep.weyl_slack = -std::numeric_limits<double>::infinity();
    for (double en : grid)
        rep.weyl_slack = std::max(rep.weyl_slack,
                                  std::abs(spectral_distance(e, en) - spectral_distance(eni, en)) - rep.cross_norm);
    return rep;
}

// ---------------------------------------------------------------------------
// Energy-set covering

EtvScales etv_scales(double nu, double kappa, int radius)
{
    const double x = nu * std::pow(static_cast<double>(radius), kappa);
    return {std::exp(-x / 3.0), std::exp(-2.0 * x / 3.0), std::exp(-x / 7.0), std::exp(-x)};
}

EtvVerdict etv_energy_sweep(const SpectralData& spec_data, const Cube& cube, double e_max, const EtvScales& s)
{
    if (!(s.c > 0.0) || !(e_max > 0.0))
        throw std::invalid_argument("ETV sweep needs c > 0 and E* > 0");
    const auto boundary = cube.boundary_indices();
    const auto u = static_cast<Eigen::Index>(cube.center_index());
    Eigen::MatrixXd psi_b(static_cast<Eigen::Index>(boundary.size()), spec_data.vectors.cols());
    for (std::size_t k = 0; k < boundary.size(); ++k)
        psi_b.row(static_cast<Eigen::Index>(k)) = spec_data.vectors.row(static_cast<Eigen::Index>(boundary[k]));
    const Eigen::VectorXd w = spec_data.vectors.row(u).transpose();
    const auto inside = window_values(spec_data.values, 0.0, e_max);

    EtvVerdict v;
    const double step = s.c / 4.0;
    const auto count = static_cast<std::size_t>(std::floor(e_max / step)) + 1;
    for (std::size_t k = 0; k <= count; ++k) {
        const double en = std::min(e_max, static_cast<double>(k) * step);
        if (k == count && en == static_cast<double>(k - 1) * step)
            break;
        ++v.grid_points;
        double f;
        if (spectral_distance(spec_data.values, en) <= kResonanceGap) {
            f = std::numeric_limits<double>::infinity();
        } else {
            const Eigen::VectorXd col = psi_b * (w.array() / (spec_data.values.array() - en)).matrix();
            f = col.cwiseAbs().maxCoeff();
        }
        if (!(f > 2.0 * s.a))
            continue;
        ++v.exceed_points;
        const bool near = std::any_of(inside.begin(), inside.end(),
                                      [&](double ej) { return std::abs(ej - en) < 2.0 * s.c; });
        if (!near) {
            ++v.uncovered_points;
            v.covered = false;
            if (!v.first_uncovered)
                v.first_uncovered = en;
        }
    }
    return v;
}

EtvExperiment etv_experiment(const Cube& cube, const ModelSpec& spec, double nu, double kappa,
                             std::size_t samples, std::uint64_t seed, int workers)
{
    if (samples == 0)
        throw std::invalid_argument("need at least one sample");
    EtvExperiment out;
    out.scales = etv_scales(nu, kappa, cube.radius());
    out.samples = samples;
    out.verdicts.resize(samples);
    const auto region = cube.projection_sites();
    parallel_for(samples, workers, [&](std::size_t t) {
        auto sample = sample_disorder(region, trial_key(seed, tag_of("etv"), t), spec);
        auto data = eigensolve(assemble_hamiltonian(cube, sample, spec));
        out.verdicts[t] = etv_energy_sweep(data, cube, spec.energy_window, out.scales);
    });
    for (const auto& v : out.verdicts)
        if (!v.covered)
            ++out.violations;
    out.frequency = static_cast<double>(out.violations) / samples;
    out.stderr_ = binomial_stderr(out.frequency, samples);
    out.budget = spec.energy_window * out.scales.q / out.scales.b;
    return out;
}

// ---------------------------------------------------------------------------
// Correlator decay

std::pair<Configuration, Configuration> efc_configurations(EfcPattern pattern, int r)
{
    if (r < 0)
        throw std::invalid_argument("R must be non-negative");
    if (pattern == EfcPattern::Pair)
        return {Configuration(1, {0, 0}), Configuration(1, {0, r})};
    return {Configuration(1, {0, 0, r}), Configuration(1, {0, r, r})};
}

Cube efc_domain(const Configuration& x, const Configuration& y, int r)
{
    std::vector<int> mid(x.coords().size());
    int half = 0;
    for (std::size_t k = 0; k < mid.size(); ++k) {
        const int lo = std::min(x[k], y[k]);
        const int hi = std::max(x[k], y[k]);
        mid[k] = lo + (hi - lo) / 2;
        half = std::max(half, (hi - lo + 1) / 2);
    }
    return Cube(Configuration(x.dim(), std::move(mid)), (r + 1) / 2 + half);
}

EfcDecayResult efc_decay_experiment(const ModelSpec& spec, const std::vector<int>& r_list, std::size_t trials,
                                    std::uint64_t seed, const EfcOptions& opts)
{
    spec.validate();
    if (r_list.empty() || trials < 2)
        throw std::invalid_argument("correlator decay needs R values and at least two trials");
    const int expected_n = opts.pattern == EfcPattern::Pair ? 2 : 3;
    if (spec.particles != expected_n || spec.dim != 1)
        throw std::invalid_argument("configuration pattern does not match the model's N and d");

    EfcDecayResult out;
    const double e_max = spec.energy_window;
    for (int r : r_list) {
        auto [x, y] = efc_configurations(opts.pattern, r);
        const Cube domain = efc_domain(x, y, r);
        const auto region = domain.projection_sites();
        const auto ix = *domain.index_of(x);
        const auto iy = *domain.index_of(y);
        const int gk_radius = (r + 1) / 2;
        const Cube cx(x, gk_radius), cy(y, gk_radius);

        std::vector<double> upsilon(trials), gk(trials);
        std::vector<std::size_t> failures(trials, 0);
        parallel_for(trials, opts.workers, [&](std::size_t t) {
            auto sample = sample_disorder(region, trial_key(seed, tag_of("efc-decay"), t), spec);
            auto data = eigensolve(assemble_hamiltonian(domain, sample, spec));
            upsilon[t] = efc_kernel(data, ix, iy, 0.0, e_max);

            CounterRng rng(combine(trial_key(seed, tag_of("efc-decay/time"), t), static_cast<std::uint64_t>(r)));
            for (int s = 0; s < opts.time_samples; ++s) {
                const double time = rng.uniform(0.0, opts.time_max);
                if (evolution_amplitude(data, ix, iy, 0.0, e_max, time) > upsilon[t] + 1e-12)
                    ++failures[t];
            }

            auto dx = eigensolve(assemble_hamiltonian(cx, sample, spec));
            auto dy = eigensolve(assemble_hamiltonian(cy, sample, spec));
            double z = 0.0;
            for (int k = 0; k < opts.gk_energy_points; ++k) {
                const double en = e_max * (k + 0.5) / opts.gk_energy_points;
                auto f = [&](const SpectralData& sd, const Cube& c) {
                    try {
                        return dnorm(sd, c, en);
                    } catch (const ResonantEnergy&) {
                        return std::numeric_limits<double>::infinity();
                    }
                };
                z = std::max(z, std::min(f(dx, cx), f(dy, cy)));
            }
            gk[t] = z;
        });

        EfcRow row;
        row.r = r;
        row.d_sym = sym_distance(x, y);
        row.d_haus = hausdorff_distance(x, y);
        const double n = static_cast<double>(trials);
        row.mean = std::accumulate(upsilon.begin(), upsilon.end(), 0.0) / n;
        double var = 0.0;
        for (double v : upsilon)
            var += (v - row.mean) * (v - row.mean);
        row.stderr_ = std::sqrt(var / (n - 1.0) / n);
        row.dominance_failures = std::accumulate(failures.begin(), failures.end(), std::size_t{0});

        std::vector<double> sorted = gk;
        std::sort(sorted.begin(), sorted.end());
        const auto qi = static_cast<std::size_t>(std::ceil(opts.gk_quantile * n)) - 1;
        row.gk_u = sorted[std::min(qi, sorted.size() - 1)];
        row.gk_h = static_cast<double>(std::count_if(gk.begin(), gk.end(), [&](double v) { return v > row.gk_u; })) / n;

        out.rows.push_back(row);
        out.samples.push_back(std::move(upsilon));
    }

    out.strictly_decreasing = true;
    for (std::size_t i = 1; i < out.rows.size(); ++i)
        if (!(out.rows[i].mean < out.rows[i - 1].mean))
            out.strictly_decreasing = false;

    std::vector<double> rs, logs, ds, means;
    for (const auto& row : out.rows)
        if (row.mean > 0.0) {
            rs.push_back(row.r);
            logs.push_back(std::log(row.mean));
            ds.push_back(row.d_sym);
            means.push_back(row.mean);
        }
    if (rs.size() >= 3) {
        out.log_fit = linear_fit(rs, logs);
        try {
            out.stretched = fit_stretched_exponential(ds, means);
        } catch (const std::invalid_argument&) {
            out.stretched.reset();
        }
    }
    return out;
}

} // namespace anderson
