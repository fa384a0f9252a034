#pragma once

// Scale-induction machinery: parameter bookkeeping, singularity statistics,
// bad/good classification, dominated Green-function decay, tensor checks for
// weakly interactive cubes, energy-set covering and correlator decay.

#include "anderson/dominated.hpp"
#include "anderson/model.hpp"
#include "anderson/spectral.hpp"
#include "anderson/stats.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace anderson {

struct ScaleParams {
    int max_particles = 2; // N*
    int initial_scale = 4; // L0
    int growth = 3;        // Y
    double kappa = 0.3;
    double beta = 0.4;
    double delta = 0.6;
    double zeta = 1.0;
    double mass = 1.0;     // m*
    double nu = 1.0;       // ν*
    double energy_window = 1.0;

    // L_k = L0 Y^k
    long long scale(int k) const;
    // m_n = m* (1 + 4 L0^{β-δ})^{N*-n}
    double mass_n(int n) const;
    // ν_n = ν* (2 Y^κ)^{N*-n}
    double nu_n(int n) const;

    friend bool operator==(const ScaleParams&, const ScaleParams&) = default;
};

enum class ParamMode { Strict, Exploratory };

struct ConstraintCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ParamReport {
    std::vector<ConstraintCheck> checks;
    std::vector<double> masses; // m_1 .. m_{N*}
    std::vector<double> nus;    // ν_1 .. ν_{N*}
    int minimal_growth = 0;

    bool ok() const;
    std::vector<std::string> failures() const;
};

// max(24 N*, ceil(12^{1/(1-δ)})).
int minimal_growth(int max_particles, double delta);

ParamReport validate_params(const ScaleParams& p);
// Strict mode throws on any failed constraint; exploratory mode only reports.
ParamReport check_params(const ScaleParams& p, ParamMode mode);

std::vector<long long> scale_sequence(const ScaleParams& p, int count);

// NS parameters at scale k for n particles.
NsParams ns_params(const ScaleParams& p, int n, double c_gri = 2.0);

// ---------------------------------------------------------------------------
// Singularity statistics

struct SingularityEstimate {
    std::size_t singular = 0;
    std::size_t trials = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double bound = 0.0; // e^{-ν_n L_k^κ}
    int radius = 0;
};

// Frequency of S among cubes B_{L_k}(0) for n particles.
SingularityEstimate estimate_singularity_prob(int n, int k, double energy, const ScaleParams& p,
                                              const ModelSpec& spec, std::size_t trials, std::uint64_t seed,
                                              double c_gri = 2.0, int workers = 1);

// ---------------------------------------------------------------------------
// Bad and good cubes

enum class WitnessKind { None, WeaklyInteractive, DistantPair };

struct BadGoodResult {
    bool good = true;
    WitnessKind kind = WitnessKind::None;
    std::vector<Cube> witness;
    std::size_t scanned = 0;
    std::size_t singular = 0;
    int stride = 1;
};

// Scans the subcubes B_{L_k}(x) ⊂ B_{L_{k+1}}(u), x on the lattice; stride 1
// up to L_{k+1} = 32, stride L_k beyond.
BadGoodResult classify_bad_good(const Cube& big, double energy, int lk, const NsParams& ns,
                                const DisorderSample& sample, const ModelSpec& spec);

struct ImplicationRecord {
    bool good = false;
    bool non_resonant = false;
    bool non_singular = false;
    double dnorm = 0.0;
    double threshold = 0.0;
    bool premises() const { return good && non_resonant; }
    bool violation() const { return premises() && !non_singular; }
};

// Evaluates good, (E,β)-NR and NS for the big cube in one disorder world.
ImplicationRecord implication_check(const Cube& big, double energy, int lk, const NsParams& ns, double beta,
                                    const DisorderSample& sample, const ModelSpec& spec);

// ---------------------------------------------------------------------------
// Dominated decay of the Green function

struct DominationReport {
    bool cnr = false;
    bool mass_condition = false; // m ℓ^δ > 2 L^β > L^β + ln|B_L|
    double reduced_mass = 0.0;   // m' = m - 2 ℓ^{-δ} L^β
    double q = 0.0;
    bool hypotheses_met() const { return cnr && mass_condition && reduced_mass > 0.0; }

    std::size_t checked = 0;          // claimed-regular points tested
    std::size_t regular_failures = 0; // f(x) > q M(f, B_{ℓ+1}(x))
    std::vector<Configuration> singular_points;
    bool predicate = false;           // full domination predicate
    std::optional<DominatedBound> bound;
    double dnorm = 0.0;
    double ns_threshold = 0.0;
    bool ns = false;
};

// f(x) = |G_{B_L(u)}(y, x)| with y the boundary point of largest |G(y, u)|.
// Lattice regularity is tested on balls of radius ℓ+1, the reach of the
// resolvent expansion through the boundary of B_ℓ(x).
DominationReport verify_domination(const Cube& big, double energy, int ell, const NsParams& ns, double beta,
                                   const DisorderSample& sample, const ModelSpec& spec);

// ---------------------------------------------------------------------------
// Weakly interactive cubes

struct WiTensorReport {
    std::vector<int> cluster;           // J
    int gap = 0;                        // min over the cube of cross-cluster distances
    double cross_norm = 0.0;            // max |H - H^{ni}|
    double cross_interaction_max = 0.0; // max over the cube of cross-cluster U
    double gap_bound = 0.0;             // C_U N(N-1)/2 e^{-gap^ζ}
    double scale_bound = 0.0;           // C_U N^2/2 e^{-L^ζ}
    double sum_residual = 0.0;          // sorted eig(H^{ni}) vs sorted pair sums
    double weyl_slack = 0.0;            // max_E |dist(E,Σ) - dist(E,Σ^{ni})| - ‖U_cross‖, must be <= 0
};

WiTensorReport wi_tensor_check(const Cube& cube, const DisorderSample& sample, const ModelSpec& spec,
                               const std::vector<double>& energies = {});

// ---------------------------------------------------------------------------
// Energy-set covering

struct EtvScales {
    double a = 0.0, b = 0.0, c = 0.0, q = 0.0;
};

// a = e^{-νL^κ/3}, b = e^{-2νL^κ/3}, c = e^{-νL^κ/7}, q = e^{-νL^κ}.
EtvScales etv_scales(double nu, double kappa, int radius);

struct EtvVerdict {
    bool covered = true;
    std::size_t grid_points = 0;
    std::size_t exceed_points = 0;
    std::size_t uncovered_points = 0;
    std::optional<double> first_uncovered;
};

// Sweeps I* = [0, E*] with step c/4 and checks that every energy with
// F_u(E) > 2a lies within 2c of an eigenvalue in I*.
EtvVerdict etv_energy_sweep(const SpectralData& spec_data, const Cube& cube, double e_max, const EtvScales& s);

struct EtvExperiment {
    EtvScales scales;
    std::size_t samples = 0;
    std::size_t violations = 0;
    double frequency = 0.0;
    double stderr_ = 0.0;
    double budget = 0.0; // |I*| b^{-1} q
    std::vector<EtvVerdict> verdicts;
};

EtvExperiment etv_experiment(const Cube& cube, const ModelSpec& spec, double nu, double kappa,
                             std::size_t samples, std::uint64_t seed, int workers = 1);

// ---------------------------------------------------------------------------
// Correlator decay

enum class EfcPattern { Pair, Triple };

// Pair: x = (0, 0), y = (0, R).  Triple: x = (0, 0, R), y = (0, R, R).
std::pair<Configuration, Configuration> efc_configurations(EfcPattern pattern, int r);
// Smallest cube around the midpoint holding B_{⌈R/2⌉}(x) and B_{⌈R/2⌉}(y).
Cube efc_domain(const Configuration& x, const Configuration& y, int r);

struct EfcRow {
    int r = 0;
    int d_sym = 0;
    int d_haus = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t dominance_failures = 0; // sampled-t amplitude above the kernel
    double gk_u = 0.0;
    double gk_h = 0.0;
};

struct EfcDecayResult {
    std::vector<EfcRow> rows;
    std::vector<std::vector<double>> samples; // [row][trial]
    std::optional<LinearFit> log_fit;         // log mean vs R
    std::optional<StretchedExpFit> stretched;
    bool strictly_decreasing = false;
};

struct EfcOptions {
    EfcPattern pattern = EfcPattern::Pair;
    int time_samples = 100;
    double time_max = 1000.0;
    int gk_energy_points = 64;
    double gk_quantile = 0.9;
    int workers = 1;
};

EfcDecayResult efc_decay_experiment(const ModelSpec& spec, const std::vector<int>& r_list, std::size_t trials,
                                    std::uint64_t seed, const EfcOptions& opts = {});

} // namespace anderson
