#pragma once

// Dominated decay of non-negative functions on finite graphs.
//
// A point x of B_{L-ℓ}(u) is (ℓ, q)-regular for f when f(x) <= q M(f, B_ℓ(x)),
// M(f, A) being the max of f over A. A function whose non-singular points are
// all regular, and which is contracted along regular layers, decays from the
// boundary to the center at a geometric rate.

#include "anderson/geometry.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace anderson {

class Graph {
public:
    Graph() = default;
    explicit Graph(std::vector<std::vector<int>> adjacency);

    int size() const noexcept { return static_cast<int>(adj_.size()); }
    const std::vector<int>& neighbours(int v) const { return adj_.at(static_cast<std::size_t>(v)); }
    // BFS distances; unreachable vertices get INT_MAX.
    std::vector<int> distances_from(int v) const;
    bool connected() const;

private:
    std::vector<std::vector<int>> adj_;
};

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph grid_graph(int width, int height);
// King's-move graph on a lattice cube: graph distance equals the max-norm.
Graph lattice_graph(const Cube& cube);

// B_b(u) \ B_{a-1}(u), i.e. the layers a..b.
struct Annulus {
    int inner = 0;
    int outer = 0;
    int width() const { return outer - inner + 1; }
};

int cover_width(const std::vector<Annulus>& cover);

struct GraphFunction {
    Graph graph;
    int center = 0;
    int radius = 1;     // L
    int scale = 1;      // ℓ
    double q = 0.5;
    std::vector<double> values;
    std::vector<int> singular; // S
};

// All-pairs distances plus helpers; built once per instance.
class DominationContext {
public:
    explicit DominationContext(const GraphFunction& gf);

    const GraphFunction& function() const { return gf_; }
    int distance(int a, int b) const { return dist_[static_cast<std::size_t>(a) * n_ + b]; }
    int depth(int v) const { return distance(gf_.center, v); }
    double ball_max(int x, int r) const;

    // Per-vertex regularity flag (false outside B_{L-ℓ}(u)).
    const std::vector<bool>& regular() const { return regular_; }
    // r(x): smallest r >= |u - x|, r <= L - ℓ, whose layer is nonempty and
    // fully regular; -1 when none exists.
    int regular_layer_above(int x) const;
    bool layer_regular(int r) const;
    bool layer_hits_singular(int r) const;

    // Brute-force check of the domination predicate.
    bool dominated() const;
    // Every singular point lies in some annulus.
    bool covers_singular(const std::vector<Annulus>& cover) const;

private:
    const GraphFunction& gf_;
    std::size_t n_;
    std::vector<int> dist_;
    std::vector<bool> regular_;
    std::vector<bool> singular_;
    std::vector<bool> layer_ok_;
    std::vector<bool> layer_singular_;
};

struct DominatedBound {
    double bound = 0.0;      // q^{(L-ℓ-w)/ℓ} M(f, B_{L+1}(u))
    double center_value = 0.0;
    double boundary_max = 0.0;
    int width = 0;
    std::vector<int> layers; // r_n > ... > r_0
    bool predicate = false;  // brute-force domination check
    bool holds() const { return center_value <= bound; }
};

// Throws when w(cover) > L - ℓ or the cover misses a singular point.
DominatedBound dominated_bound(const GraphFunction& gf, const std::vector<Annulus>& cover);

// The layer recursion r_n = max{r <= L-ℓ : layer misses S},
// r_j = max{r <= r_{j+1} - ℓ : layer misses S}, with n + 1 = ⌊(L-w)/ℓ⌋.
std::vector<int> domination_layers(const DominationContext& ctx, int width);

// Random instance on a small graph, repaired towards the predicate. The
// caller should still check DominationContext::dominated().
GraphFunction random_graph_function(std::uint64_t key);

// Tight cover of S: one annulus per maximal run of layers that touch S.
std::vector<Annulus> tight_cover(const DominationContext& ctx);

} // namespace anderson
