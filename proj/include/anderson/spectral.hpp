#pragma once

// Eigensolves, Green functions and the decay functionals built on them.
//
// With mesh 1 every cell carries one basis vector, so the block norm
// ‖χ_y G χ_x‖ is the matrix entry |G(y, x)|.

#include "anderson/model.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace anderson {

// Energies closer than this to an eigenvalue are treated as resonant.
inline constexpr double kResonanceGap = 1e-12;

class ResonantEnergy : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Eigenvalues ascending, eigenvectors as orthonormal columns.
struct SpectralData {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;

    std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

SpectralData eigensolve(const HamiltonianMatrix& h);
Eigen::VectorXd eigenvalues(const HamiltonianMatrix& h);
Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& dense);

// min_j |E_j - E|; +inf for an empty spectrum.
double spectral_distance(const Eigen::VectorXd& values, double energy);

// Eigenvalues inside [lo, hi].
std::vector<double> window_values(const Eigen::VectorXd& values, double lo, double hi);

enum class GreenMethod { Spectral, Direct };

// G(dst, src; E) = <dst|(H - E)^{-1}|src>. Throws ResonantEnergy.
double green_block(const HamiltonianMatrix& h, double energy, const Configuration& src,
                   const Configuration& dst, GreenMethod method = GreenMethod::Direct);

// Column G(., src; E) by direct LU solve, after a resonance check.
Eigen::VectorXd green_column(const HamiltonianMatrix& h, double energy, std::size_t src);
// Same column from an eigendecomposition.
Eigen::VectorXd green_column(const SpectralData& spec, double energy, std::size_t src);

// Full (H - E)^{-1}.
Eigen::MatrixXd resolvent(const HamiltonianMatrix& h, double energy);

// max over z on the cube boundary of |G(z, u; E)|, u the center.
double dnorm(const HamiltonianMatrix& h, double energy);
double dnorm(const SpectralData& spec, const Cube& cube, double energy);

enum class Singularity { NS, S };
enum class Resonance { NR, R };

struct NsParams {
    double delta = 0.5;
    double mass = 1.0;
    double c_gri = 2.0;
};

// The right-hand side e^{-m L^δ} and the left-hand side prefactor C (3L)^{Nd}.
double ns_threshold(int radius, const NsParams& p);
double ns_prefactor(const Cube& cube, const NsParams& p);

// NS iff C (3L)^{Nd} dnorm <= e^{-m L^δ}. Resonant energies give S.
Singularity classify_ns(const HamiltonianMatrix& h, double energy, const NsParams& p);
Singularity classify_ns_from_dnorm(const Cube& cube, double dn, const NsParams& p);

// NR iff dist(Σ, E) >= e^{-L^β}.
Resonance classify_nr(const Eigen::VectorXd& values, double energy, int radius, double beta);
Resonance classify_nr(const HamiltonianMatrix& h, double energy, double beta);

// Complete non-resonance of B_{L_{k+1}}(u): NR against the threshold
// e^{-L_{k+1}^β} for every radius ℓ = L_k, 2L_k, ... <= L_{k+1} - L_k.
bool classify_cnr(const DisorderSample& sample, const ModelSpec& spec, double energy,
                  const Configuration& center, int lk, int lk1, double beta);

// Σ_{E_j in [lo, hi]} |ψ_j(dst)| |ψ_j(src)|.
double efc_kernel(const SpectralData& spec, std::size_t src, std::size_t dst, double lo, double hi);

// |<dst| P_{[lo,hi]} e^{-itH} |src>|.
double evolution_amplitude(const SpectralData& spec, std::size_t src, std::size_t dst, double lo,
                           double hi, double t);

// Geometric resolvent inequality for nested cubes Λ = small ⊂ Λ' = big.
// For a in A ⊂ Λ and b in B ⊂ Λ' \ Λ the ratio
//   |G'(b, a)| / ( ‖G'(b, .)‖_O · ‖G_Λ(., a)‖_∂Λ )
// is reported, where O holds the boundary layer of Λ and its outer
// neighbours in Λ', and norms are Euclidean. On the lattice this ratio is at
// most (1/2) sqrt(Nd).
struct GriMeasurement {
    double ratio = 0.0;
    Configuration worst_a;
    Configuration worst_b;
    std::size_t pairs = 0;
};

GriMeasurement gri_ratio(const Cube& small, const Cube& big, const DisorderSample& sample,
                         const ModelSpec& spec, double energy, const std::vector<Configuration>& a_set,
                         const std::vector<Configuration>& b_set);

// A = B_{ℓ/3}(u), B = Λ' \ Λ.
GriMeasurement measure_gri(const Cube& small, const Cube& big, const DisorderSample& sample,
                           const ModelSpec& spec, double energy);

double gri_lattice_bound(int particles, int dim);

} // namespace anderson
