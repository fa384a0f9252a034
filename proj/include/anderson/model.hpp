#pragma once

// Flat-tiling alloy model on the scatterer lattice Z^d.
//
// Bumps are cell indicators, so V(x) equals the amplitude of the cell
// containing x and the bumps sum to one everywhere. The N-particle operator on
// a cube is H = -1/2 Δ (Dirichlet) + U + g V.

#include "anderson/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace anderson {

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ModelSpec {
    int particles = 1;
    int dim = 1;
    double interaction_amplitude = 1.0; // C_U
    double interaction_exponent = 1.0;  // ζ, clamped to min(ζ, 1)
    double disorder_coupling = 1.0;     // g
    double amplitude_support = 1.0;     // c_V
    double energy_window = 1.0;         // E*, I* = [0, E*]
    int mesh_refinement = 1;            // reserved; only 1 is supported

    double effective_exponent() const { return interaction_exponent < 1.0 ? interaction_exponent : 1.0; }
    void validate() const;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Marginal law of the scatterer amplitudes, given by its quantile function.
class AmplitudeLaw {
public:
    virtual ~AmplitudeLaw() = default;
    virtual double quantile(double u) const = 0;
    virtual double upper() const = 0;
};

class UniformLaw final : public AmplitudeLaw {
public:
    explicit UniformLaw(double support = 1.0);
    double quantile(double u) const override { return support_ * u; }
    double upper() const override { return support_; }

private:
    double support_;
};

class DisorderSample {
public:
    DisorderSample() = default;
    DisorderSample(std::map<Site, double> amplitudes, std::uint64_t seed, double support);

    double amplitude(std::span<const int> site) const;
    bool contains(std::span<const int> site) const;
    bool covers(const std::vector<Site>& sites) const;

    // Direct assignment, for planted (non-random) instances.
    void set(const Site& site, double value);

    const std::map<Site, double>& amplitudes() const noexcept { return amplitudes_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double support() const noexcept { return support_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }
    bool planted() const noexcept { return planted_; }

    friend bool operator==(const DisorderSample&, const DisorderSample&) = default;

private:
    std::map<Site, double> amplitudes_;
    std::uint64_t seed_ = 0;
    double support_ = 1.0;
    bool planted_ = false;
};

// The amplitude at a site depends only on (seed, site).
double site_uniform(std::uint64_t seed, std::span<const int> site);

DisorderSample sample_disorder(const std::vector<Site>& region, std::uint64_t seed, const ModelSpec& spec);
DisorderSample sample_disorder(const std::vector<Site>& region, std::uint64_t seed, const AmplitudeLaw& law);

// Every site reachable by the cube's particles.
std::vector<Site> scatterer_region(const std::vector<Cube>& cubes);

// g * Σ_j V(cell(x_j)).
double potential_value(const Configuration& x, const DisorderSample& sample, const ModelSpec& spec);

// Σ_{i<j} C_U exp(-|x_i - x_j|^ζ).
double interaction_value(const Configuration& x, const ModelSpec& spec);

struct HamiltonianMatrix {
    Cube cube;
    Eigen::SparseMatrix<double> kinetic;
    Eigen::VectorXd interaction;
    Eigen::VectorXd potential;

    std::size_t size() const { return static_cast<std::size_t>(interaction.size()); }
    Eigen::MatrixXd dense() const;
};

HamiltonianMatrix assemble_hamiltonian(const Cube& cube, const DisorderSample& sample, const ModelSpec& spec);

// Dirichlet -1/2 Δ on B_L(u): diagonal Nd, -1/2 on nearest-neighbour pairs.
Eigen::SparseMatrix<double> kinetic_matrix(const Cube& cube);

struct SampleMean {
    double mean = 0.0;                     // ξ_Q
    std::map<Site, double> fluctuations;   // η_x = V(x) - ξ_Q
};

SampleMean sample_mean_decompose(const DisorderSample& sample, const std::vector<Site>& q);

// V_a + c on Q, unchanged elsewhere. No clamping to the support.
DisorderSample shift_amplitudes(const DisorderSample& sample, const std::vector<Site>& q, double c);

// Empirical continuity modulus sup_t [F(t+s) - F(t)] of the law of the sample
// mean over |Q| IID amplitudes, one value per entry of s_grid.
std::vector<double> modulus_experiment(int q_size, const std::vector<double>& s_grid, int trials,
                                       std::uint64_t seed, const AmplitudeLaw& law);

} // namespace anderson
