#pragma once

// Multi-particle configuration-space geometry on the lattice (Z^d)^N.
//
// A configuration x = (x_1, ..., x_N) is stored as a flat coordinate array
// of length N*d. All distances use the max-norm. Cubes are lattice balls
// B_L(u) = { y : |y - u| <= L }, which are the lattice counterparts of the
// open continuum cubes of radius L + 1/2; every lattice point carries the
// unit cell around it.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace anderson {

class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A point of Z^d.
using Site = std::vector<int>;

class Configuration {
public:
    Configuration() = default;
    Configuration(int dim, std::vector<int> coords);

    static Configuration from_sites(const std::vector<Site>& sites);

    int particles() const noexcept { return dim_ == 0 ? 0 : static_cast<int>(coords_.size()) / dim_; }
    int dim() const noexcept { return dim_; }

    std::span<const int> particle(int j) const
    {
        return {coords_.data() + static_cast<std::size_t>(j) * dim_, static_cast<std::size_t>(dim_)};
    }
    Site site(int j) const;
    std::vector<Site> sites() const;

    const std::vector<int>& coords() const noexcept { return coords_; }
    int operator[](std::size_t i) const { return coords_[i]; }

    // (result)_j = x_{perm[j]}
    Configuration permuted(std::span<const int> perm) const;

    std::string to_string() const;

    friend bool operator==(const Configuration&, const Configuration&) = default;
    friend auto operator<=>(const Configuration&, const Configuration&) = default;

private:
    int dim_ = 0;
    std::vector<int> coords_;
};

// Inclusive integer box [lo, hi] in Z^d.
struct Box {
    Site lo;
    Site hi;

    int dim() const noexcept { return static_cast<int>(lo.size()); }
    bool contains(std::span<const int> p) const;
    bool contains(const Box& other) const;
    bool intersects(const Box& other) const;
    // Lattice diameter in the max-norm.
    int diameter() const;
    std::size_t volume() const;
    std::vector<Site> sites() const;

    friend bool operator==(const Box&, const Box&) = default;
};

Box bounding_box(std::span<const Box> boxes);

// Lattice ball B_L(u) in (Z^d)^N.
class Cube {
public:
    Cube() = default;
    Cube(Configuration center, int radius);

    const Configuration& center() const noexcept { return center_; }
    int radius() const noexcept { return radius_; }
    int particles() const noexcept { return center_.particles(); }
    int dim() const noexcept { return center_.dim(); }

    // (2L+1)^{Nd}
    std::size_t volume() const noexcept { return volume_; }
    int side() const noexcept { return 2 * radius_ + 1; }

    bool contains(const Configuration& x) const;
    bool on_boundary(const Configuration& x) const;

    // Lexicographic (mixed-radix) enumeration of B_L(u).
    Configuration point(std::size_t index) const;
    std::optional<std::size_t> index_of(const Configuration& x) const;
    std::size_t center_index() const { return volume_ / 2; }
    std::vector<Configuration> points() const;
    // Indices of ∂B_L(u) = { y in B_L(u) : |u - y| = L }.
    std::vector<std::size_t> boundary_indices() const;

    // Single-particle projection of particle j, inflated by `extra`:
    // the box u_j + [-(L+extra), L+extra]^d.
    Box particle_box(int j, int extra = 0) const;
    // Scatterer sites touched by the cube: the union of all particle boxes.
    std::vector<Site> projection_sites(int extra = 0) const;

    friend bool operator==(const Cube&, const Cube&) = default;

private:
    Configuration center_;
    int radius_ = 0;
    std::size_t volume_ = 0;
};

int site_distance(std::span<const int> a, std::span<const int> b);

int max_norm(const Configuration& x, const Configuration& y);

enum class MatchingMode { Automatic, Enumeration, Bottleneck };

// Lexicographically smallest permutation p minimizing max_j |x_{p[j]} - y_j|.
std::vector<int> optimal_permutation(const Configuration& x, const Configuration& y,
                                     MatchingMode mode = MatchingMode::Automatic);

// d_S(x, y) = min over permutations of |pi(x) - y|.
int sym_distance(const Configuration& x, const Configuration& y,
                 MatchingMode mode = MatchingMode::Automatic);

// Hausdorff distance between the coordinate sets {x_j} and {y_j}.
int hausdorff_distance(const Configuration& x, const Configuration& y);

// max_{i != j} |u_i - u_j|, zero for a single particle.
int diam_projection(const Configuration& u);

enum class Interactivity { Weak, Strong };

// WI iff diam Πu >= 3NL; single-particle cubes are SI.
Interactivity classify_wi_si(const Cube& cube);

// A proper subset J of particle indices (0-based, sorted, containing 0) with
// min_{i in J, j not in J} |u_i - u_j| > 3L. Throws for SI cubes.
std::vector<int> wi_decompose(const Cube& cube);

// Certificate of weak Q-separation: the particle boxes of the separated cube
// indexed by j1 lie in q, the rest miss q; likewise j2 for the other cube,
// and |j1| > |j2|. `first_separated` tells whether the separated cube is the
// first argument of weakly_separated().
struct WeakSeparation {
    Box q;
    std::vector<int> j1;
    std::vector<int> j2;
    bool first_separated = true;
};

std::optional<WeakSeparation> weakly_separated(const Cube& cx, const Cube& cy);

// Re-validates the containment/disjointness conditions of a certificate.
bool certificate_valid(const Cube& cx, const Cube& cy, const WeakSeparation& cert);

// Both cubes must be SI. True iff the projections inflated by r0 are disjoint.
bool scatterer_supports_disjoint(const Cube& cx, const Cube& cy, int r0);

} // namespace anderson
