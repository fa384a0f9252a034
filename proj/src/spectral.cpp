#include "anderson/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace anderson {

namespace {

void require_nonresonant(const Eigen::VectorXd& values, double energy)
{
    const double gap = spectral_distance(values, energy);
    if (gap <= kResonanceGap)
        throw ResonantEnergy("energy " + std::to_string(energy) + " is within 1e-12 of an eigenvalue");
}

std::size_t index_or_throw(const Cube& cube, const Configuration& x)
{
    auto idx = cube.index_of(x);
    if (!idx)
        throw GeometryError("configuration " + x.to_string() + " lies outside the cube");
    return *idx;
}

} // namespace

SpectralData eigensolve(const HamiltonianMatrix& h)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.dense());
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& dense)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigensolver failed to converge");
    return solver.eigenvalues();
}

Eigen::VectorXd eigenvalues(const HamiltonianMatrix& h)
{
    return eigenvalues(h.dense());
}

double spectral_distance(const Eigen::VectorXd& values, double energy)
{
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < values.size(); ++j)
        best = std::min(best, std::abs(values[j] - energy));
    return best;
}

std::vector<double> window_values(const Eigen::VectorXd& values, double lo, double hi)
{
    std::vector<double> out;
    for (Eigen::Index j = 0; j < values.size(); ++j)
        if (values[j] >= lo && values[j] <= hi)
            out.push_back(values[j]);
    return out;
}

Eigen::VectorXd green_column(const SpectralData& spec, double energy, std::size_t src)
{
    require_nonresonant(spec.values, energy);
    Eigen::VectorXd w = spec.vectors.row(static_cast<Eigen::Index>(src)).transpose();
    w.array() /= (spec.values.array() - energy);
    return spec.vectors * w;
}

Eigen::VectorXd green_column(const HamiltonianMatrix& h, double energy, std::size_t src)
{
    Eigen::MatrixXd m = h.dense();
    require_nonresonant(eigenvalues(m), energy);
    m.diagonal().array() -= energy;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m.rows());
    e[static_cast<Eigen::Index>(src)] = 1.0;
    return m.partialPivLu().solve(e);
}

Eigen::MatrixXd resolvent(const HamiltonianMatrix& h, double energy)
{
    Eigen::MatrixXd m = h.dense();
    require_nonresonant(eigenvalues(m), energy);
    m.diagonal().array() -= energy;
    return m.partialPivLu().inverse();
}

double green_block(const HamiltonianMatrix& h, double energy, const Configuration& src,
                   const Configuration& dst, GreenMethod method)
{
    const auto s = index_or_throw(h.cube, src);
    const auto d = index_or_throw(h.cube, dst);
    if (method == GreenMethod::Spectral)
        return green_column(eigensolve(h), energy, s)[static_cast<Eigen::Index>(d)];
    return green_column(h, energy, s)[static_cast<Eigen::Index>(d)];
}

namespace {

double boundary_max(const Cube& cube, const Eigen::VectorXd& column)
{
    double best = 0.0;
    for (auto z : cube.boundary_indices())
        best = std::max(best, std::abs(column[static_cast<Eigen::Index>(z)]));
    return best;
}

} // namespace

double dnorm(const HamiltonianMatrix& h, double energy)
{
    return boundary_max(h.cube, green_column(h, energy, h.cube.center_index()));
}

double dnorm(const SpectralData& spec, const Cube& cube, double energy)
{
    return boundary_max(cube, green_column(spec, energy, cube.center_index()));
}

double ns_threshold(int radius, const NsParams& p)
{
    return std::exp(-p.mass * std::pow(static_cast<double>(radius), p.delta));
}

double ns_prefactor(const Cube& cube, const NsParams& p)
{
    const double nd = static_cast<double>(cube.center().coords().size());
    return p.c_gri * std::pow(3.0 * cube.radius(), nd);
}

Singularity classify_ns_from_dnorm(const Cube& cube, double dn, const NsParams& p)
{
    return ns_prefactor(cube, p) * dn <= ns_threshold(cube.radius(), p) ? Singularity::NS : Singularity::S;
}

Singularity classify_ns(const HamiltonianMatrix& h, double energy, const NsParams& p)
{
    try {
        return classify_ns_from_dnorm(h.cube, dnorm(h, energy), p);
    } catch (const ResonantEnergy&) {
        return Singularity::S;
    }
}

Resonance classify_nr(const Eigen::VectorXd& values, double energy, int radius, double beta)
{
    const double threshold = std::exp(-std::pow(static_cast<double>(radius), beta));
    return spectral_distance(values, energy) >= threshold ? Resonance::NR : Resonance::R;
}

Resonance classify_nr(const HamiltonianMatrix& h, double energy, double beta)
{
    return classify_nr(eigenvalues(h), energy, h.cube.radius(), beta);
}

bool classify_cnr(const DisorderSample& sample, const ModelSpec& spec, double energy,
                  const Configuration& center, int lk, int lk1, double beta)
{
    if (lk < 1 || lk1 <= lk)
        throw std::invalid_argument("CNR needs 1 <= L_k < L_{k+1}");
    const double threshold = std::exp(-std::pow(static_cast<double>(lk1), beta));
    for (int ell = lk; ell <= lk1 - lk; ell += lk) {
        auto h = assemble_hamiltonian(Cube(center, ell), sample, spec);
        if (spectral_distance(eigenvalues(h), energy) < threshold)
            return false;
    }
    return true;
}

double efc_kernel(const SpectralData& spec, std::size_t src, std::size_t dst, double lo, double hi)
{
    const auto s = static_cast<Eigen::Index>(src);
    const auto d = static_cast<Eigen::Index>(dst);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < spec.values.size(); ++j)
        if (spec.values[j] >= lo && spec.values[j] <= hi)
            sum += std::abs(spec.vectors(d, j)) * std::abs(spec.vectors(s, j));
    return sum;
}

double evolution_amplitude(const SpectralData& spec, std::size_t src, std::size_t dst, double lo,
                           double hi, double t)
{
    const auto s = static_cast<Eigen::Index>(src);
    const auto d = static_cast<Eigen::Index>(dst);
    std::complex<double> sum = 0.0;
    for (Eigen::Index j = 0; j < spec.values.size(); ++j)
        if (spec.values[j] >= lo && spec.values[j] <= hi)
            sum += spec.vectors(d, j) * spec.vectors(s, j) * std::polar(1.0, -t * spec.values[j]);
    return std::abs(sum);
}

double gri_lattice_bound(int particles, int dim)
{
    return 0.5 * std::sqrt(static_cast<double>(particles) * dim);
}

GriMeasurement gri_ratio(const Cube& small, const Cube& big, const DisorderSample& sample,
                         const ModelSpec& spec, double energy, const std::vector<Configuration>& a_set,
                         const std::vector<Configuration>& b_set)
{
    if (a_set.empty() || b_set.empty())
        throw std::invalid_argument("GRI needs nonempty cell sets A and B");
    for (const auto& a : a_set)
        for (const auto& b : b_set)
            if (a == b)
                throw std::invalid_argument("GRI cell sets A and B must be disjoint");

    // Λ must sit inside Λ' with a spare layer so the outer neighbours exist.
    const int gap = big.radius() - small.radius() - max_norm(small.center(), big.center());
    if (gap < 1)
        throw std::invalid_argument("inner cube must lie strictly inside the outer cube");
    for (const auto& a : a_set)
        if (!small.contains(a))
            throw std::invalid_argument("A must lie in the inner cube");
    for (const auto& b : b_set)
        if (!big.contains(b) || small.contains(b))
            throw std::invalid_argument("B must lie in the outer cube and outside the inner cube");

    auto h_small = assemble_hamiltonian(small, sample, spec);
    auto h_big = assemble_hamiltonian(big, sample, spec);
    const Eigen::MatrixXd g_big = resolvent(h_big, energy);
    const Eigen::MatrixXd g_small = resolvent(h_small, energy);

    // O: boundary layer of Λ plus its nearest neighbours outside Λ.
    std::vector<Eigen::Index> layer;
    for (auto z : small.boundary_indices()) {
        auto x = small.point(z);
        layer.push_back(static_cast<Eigen::Index>(*big.index_of(x)));
        auto coords = x.coords();
        for (std::size_t k = 0; k < coords.size(); ++k)
            for (int step : {-1, 1}) {
                auto c = coords;
                c[k] += step;
                Configuration y(x.dim(), std::move(c));
                if (!small.contains(y))
                    layer.push_back(static_cast<Eigen::Index>(*big.index_of(y)));
            }
    }
    std::sort(layer.begin(), layer.end());
    layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
    const auto inner_boundary = small.boundary_indices();

    std::vector<double> row_norm(b_set.size());
    for (std::size_t k = 0; k < b_set.size(); ++k) {
        const auto ib = static_cast<Eigen::Index>(*big.index_of(b_set[k]));
        double row = 0.0;
        for (auto w : layer)
            row += g_big(ib, w) * g_big(ib, w);
        row_norm[k] = std::sqrt(row);
    }

    GriMeasurement out;
    for (const auto& a : a_set) {
        const auto ia_small = static_cast<Eigen::Index>(*small.index_of(a));
        const auto ia_big = static_cast<Eigen::Index>(*big.index_of(a));
        double col = 0.0;
        for (auto z : inner_boundary) {
            const double v = g_small(static_cast<Eigen::Index>(z), ia_small);
            col += v * v;
        }
        col = std::sqrt(col);
        for (std::size_t k = 0; k < b_set.size(); ++k) {
            const auto& b = b_set[k];
            const auto ib = static_cast<Eigen::Index>(*big.index_of(b));
            const double denom = row_norm[k] * col;
            const double num = std::abs(g_big(ib, ia_big));
            ++out.pairs;
            if (denom == 0.0)
                continue;
            const double r = num / denom;
            if (r > out.ratio) {
                out.ratio = r;
                out.worst_a = a;
                out.worst_b = b;
            }
        }
    }
    return out;
}

GriMeasurement measure_gri(const Cube& small, const Cube& big, const DisorderSample& sample,
                           const ModelSpec& spec, double energy)
{
    std::vector<Configuration> a_set = Cube(small.center(), small.radius() / 3).points();
    std::vector<Configuration> b_set;
    for (auto& y : big.points())
        if (!small.contains(y))
            b_set.push_back(std::move(y));
    return gri_ratio(small, big, sample, spec, energy, a_set, b_set);
}

} // namespace anderson
