#include "anderson/dominated.hpp"

#include "anderson/random.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace anderson {

Graph::Graph(std::vector<std::vector<int>> adjacency) : adj_(std::move(adjacency))
{
    const int n = size();
    for (auto& list : adj_) {
        for (int v : list)
            if (v < 0 || v >= n)
                throw std::invalid_argument("graph edge points outside the vertex set");
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
}

std::vector<int> Graph::distances_from(int v) const
{
    std::vector<int> dist(adj_.size(), INT_MAX);
    std::deque<int> queue{v};
    dist[static_cast<std::size_t>(v)] = 0;
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        for (int y : adj_[static_cast<std::size_t>(x)])
            if (dist[static_cast<std::size_t>(y)] == INT_MAX) {
                dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
                queue.push_back(y);
            }
    }
    return dist;
}

bool Graph::connected() const
{
    if (adj_.empty())
        return true;
    auto d = distances_from(0);
    return std::none_of(d.begin(), d.end(), [](int v) { return v == INT_MAX; });
}

Graph path_graph(int n)
{
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int i = 0; i + 1 < n; ++i) {
        adj[i].push_back(i + 1);
        adj[i + 1].push_back(i);
    }
    return Graph(std::move(adj));
}

Graph cycle_graph(int n)
{
    if (n < 3)
        throw std::invalid_argument("cycle needs at least three vertices");
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        adj[i].push_back((i + 1) % n);
        adj[i].push_back((i + n - 1) % n);
    }
    return Graph(std::move(adj));
}

Graph grid_graph(int width, int height)
{
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(width * height));
    auto id = [width](int x, int y) { return y * width + x; };
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            if (x + 1 < width) {
                adj[id(x, y)].push_back(id(x + 1, y));
                adj[id(x + 1, y)].push_back(id(x, y));
            }
            if (y + 1 < height) {
                adj[id(x, y)].push_back(id(x, y + 1));
                adj[id(x, y + 1)].push_back(id(x, y));
            }
        }
    return Graph(std::move(adj));
}

Graph lattice_graph(const Cube& cube)
{
    const std::size_t n = cube.volume();
    const std::size_t nd = cube.center().coords().size();
    std::size_t offsets = 1;
    for (std::size_t k = 0; k < nd; ++k)
        offsets *= 3;

    std::vector<std::vector<int>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = cube.point(i);
        for (std::size_t o = 0; o < offsets; ++o) {
            std::vector<int> c = x.coords();
            std::size_t rest = o;
            bool moved = false;
            for (std::size_t k = 0; k < nd; ++k) {
                const int step = static_cast<int>(rest % 3) - 1;
                rest /= 3;
                c[k] += step;
                moved = moved || step != 0;
            }
            if (!moved)
                continue;
            if (auto j = cube.index_of(Configuration(x.dim(), std::move(c))))
                adj[i].push_back(static_cast<int>(*j));
        }
    }
    return Graph(std::move(adj));
}

int cover_width(const std::vector<Annulus>& cover)
{
    int w = 0;
    for (const auto& a : cover) {
        if (a.outer < a.inner || a.inner < 0)
            throw std::invalid_argument("annulus needs 0 <= inner <= outer");
        w += a.width();
    }
    return w;
}

// ---------------------------------------------------------------------------

DominationContext::DominationContext(const GraphFunction& gf) : gf_(gf), n_(static_cast<std::size_t>(gf.graph.size()))
{
    if (gf.values.size() != n_)
        throw std::invalid_argument("function values must cover every vertex");
    if (gf.center < 0 || static_cast<std::size_t>(gf.center) >= n_)
        throw std::invalid_argument("center is not a vertex");
    if (gf.scale < 1 || gf.scale > gf.radius)
        throw std::invalid_argument("need 1 <= ℓ <= L");
    if (!(gf.q > 0.0))
        throw std::invalid_argument("q must be positive");
    for (double v : gf.values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("function values must be finite and non-negative");

    dist_.resize(n_ * n_);
    for (std::size_t v = 0; v < n_; ++v) {
        auto d = gf.graph.distances_from(static_cast<int>(v));
        std::copy(d.begin(), d.end(), dist_.begin() + static_cast<std::ptrdiff_t>(v * n_));
    }
    // Layers 0..L+1 must all be present, otherwise B_{L+1}(u) is truncated.
    std::vector<bool> seen(static_cast<std::size_t>(gf.radius) + 2, false);
    for (std::size_t v = 0; v < n_; ++v) {
        const int r = depth(static_cast<int>(v));
        if (r <= gf.radius + 1)
            seen[static_cast<std::size_t>(r)] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw std::invalid_argument("graph does not contain a full ball of radius L+1 around the center");

    singular_.assign(n_, false);
    for (int s : gf.singular) {
        if (s < 0 || static_cast<std::size_t>(s) >= n_)
            throw std::invalid_argument("singular point is not a vertex");
        singular_[static_cast<std::size_t>(s)] = true;
    }
    regular_.assign(n_, false);
    const int inner = gf.radius - gf.scale;
    for (std::size_t v = 0; v < n_; ++v) {
        const int x = static_cast<int>(v);
        if (depth(x) <= inner)
            regular_[v] = gf.values[v] <= gf.q * ball_max(x, gf.scale);
    }

    const auto layers = static_cast<std::size_t>(gf.radius) + 2;
    std::vector<int> population(layers, 0);
    layer_ok_.assign(layers, true);
    layer_singular_.assign(layers, false);
    for (std::size_t v = 0; v < n_; ++v) {
        const auto r = static_cast<std::size_t>(depth(static_cast<int>(v)));
        if (r >= layers)
            continue;
        ++population[r];
        if (!regular_[v])
            layer_ok_[r] = false;
        if (singular_[v])
            layer_singular_[r] = true;
    }
    for (std::size_t r = 0; r < layers; ++r)
        layer_ok_[r] = layer_ok_[r] && population[r] > 0;
}

double DominationContext::ball_max(int x, int r) const
{
    double m = 0.0;
    for (std::size_t v = 0; v < n_; ++v)
        if (distance(x, static_cast<int>(v)) <= r)
            m = std::max(m, gf_.values[v]);
    return m;
}

bool DominationContext::layer_regular(int r) const
{
    if (r < 0 || r > gf_.radius - gf_.scale)
        return false;
    return layer_ok_[static_cast<std::size_t>(r)];
}

bool DominationContext::layer_hits_singular(int r) const
{
    if (r < 0 || static_cast<std::size_t>(r) >= layer_singular_.size())
        return false;
    return layer_singular_[static_cast<std::size_t>(r)];
}

int DominationContext::regular_layer_above(int x) const
{
    for (int r = depth(x); r <= gf_.radius - gf_.scale; ++r)
        if (layer_regular(r))
            return r;
    return -1;
}

bool DominationContext::dominated() const
{
    const int inner = gf_.radius - gf_.scale;
    std::vector<int> layer_cache(static_cast<std::size_t>(std::max(inner, 0)) + 1, -2);
    for (std::size_t v = 0; v < n_; ++v) {
        const int x = static_cast<int>(v);
        const int d = depth(x);
        if (d > inner)
            continue;
        if (!singular_[v] && !regular_[v])
            return false;
        int& r = layer_cache[static_cast<std::size_t>(d)];
        if (r == -2)
            r = regular_layer_above(x);
        if (r >= 0 && gf_.values[v] > gf_.q * ball_max(gf_.center, r + gf_.scale))
            return false;
    }
    return true;
}

bool DominationContext::covers_singular(const std::vector<Annulus>& cover) const
{
    for (std::size_t v = 0; v < n_; ++v) {
        if (!singular_[v])
            continue;
        const int d = depth(static_cast<int>(v));
        const bool hit = std::any_of(cover.begin(), cover.end(),
                                     [d](const Annulus& a) { return a.inner <= d && d <= a.outer; });
        if (!hit)
            return false;
    }
    return true;
}

std::vector<int> domination_layers(const DominationContext& ctx, int width)
{
    const auto& gf = ctx.function();
    const int count = (gf.radius - width) / gf.scale; // n + 1
    std::vector<int> layers;
    int limit = gf.radius - gf.scale;
    for (int j = 0; j < count; ++j) {
        int r = limit;
        while (r >= 0 && ctx.layer_hits_singular(r))
            --r;
        layers.push_back(r);
        limit = r - gf.scale;
    }
    return layers;
}

DominatedBound dominated_bound(const GraphFunction& gf, const std::vector<Annulus>& cover)
{
    if (!(gf.q > 0.0 && gf.q < 1.0))
        throw std::invalid_argument("q must lie in (0, 1)");
    DominationContext ctx(gf);
    DominatedBound out;
    out.width = cover_width(cover);
    if (out.width > gf.radius - gf.scale)
        throw std::invalid_argument("w(A) > L - ℓ");
    if (!ctx.covers_singular(cover))
        throw std::invalid_argument("annuli do not cover the singular set");

    out.boundary_max = ctx.ball_max(gf.center, gf.radius + 1);
    out.center_value = gf.values[static_cast<std::size_t>(gf.center)];
    const double exponent = static_cast<double>(gf.radius - gf.scale - out.width) / gf.scale;
    out.bound = std::pow(gf.q, exponent) * out.boundary_max;
    out.layers = domination_layers(ctx, out.width);
    out.predicate = ctx.dominated();
    return out;
}

std::vector<Annulus> tight_cover(const DominationContext& ctx)
{
    const auto& gf = ctx.function();
    std::vector<Annulus> cover;
    for (int r = 0; r <= gf.radius + 1; ++r) {
        if (!ctx.layer_hits_singular(r))
            continue;
        if (!cover.empty() && cover.back().outer == r - 1)
            cover.back().outer = r;
        else
            cover.push_back({r, r});
    }
    return cover;
}

// ---------------------------------------------------------------------------
// Random instances

GraphFunction random_graph_function(std::uint64_t key)
{
    CounterRng rng(key);
    auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };

    GraphFunction gf;
    gf.radius = pick(2, 8);
    gf.scale = pick(1, std::max(1, gf.radius / 2));
    gf.q = rng.uniform(0.05, 0.95);

    const int span = 2 * gf.radius + 3;
    switch (pick(0, 3)) {
    case 0:
        gf.graph = path_graph(span);
        gf.center = gf.radius + 1;
        break;
    case 1:
        gf.graph = cycle_graph(span + pick(0, 4));
        gf.center = 0;
        break;
    case 2: {
        const int w = gf.radius + 2;
        gf.graph = grid_graph(2 * w + 1, 2 * w + 1);
        gf.center = w * (2 * w + 1) + w;
        break;
    }
    default: {
        const int r = std::min(gf.radius, 5) + 1;
        gf.radius = r - 1;
        gf.scale = std::min(gf.scale, gf.radius);
        Cube cube(Configuration(2, {0, 0}), r);
        gf.graph = lattice_graph(cube);
        gf.center = static_cast<int>(cube.center_index());
        break;
    }
    }

    const int n = gf.graph.size();
    const auto depth = gf.graph.distances_from(gf.center);
    const int inner = gf.radius - gf.scale;

    // Singular points live on a few random layers of B_{L-ℓ}(u).
    const int singular_layers = inner > 0 ? pick(0, inner / 2) : 0;
    std::vector<bool> hot(static_cast<std::size_t>(inner) + 1, false);
    for (int k = 0; k < singular_layers; ++k)
        hot[static_cast<std::size_t>(pick(0, inner))] = true;
    for (int v = 0; v < n; ++v)
        if (depth[v] <= inner && hot[static_cast<std::size_t>(depth[v])] && rng.uniform() < 0.5)
            gf.singular.push_back(v);

    gf.values.resize(static_cast<std::size_t>(n));
    for (auto& v : gf.values)
        v = std::exp(rng.uniform(-2.0, 2.0));

    // Lower values until both regularity and the layer contraction hold, or
    // give up after a fixed number of sweeps.
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool changed = false;
        DominationContext ctx(gf);
        for (int v = 0; v < n; ++v) {
            if (depth[v] > inner)
                continue;
            const bool is_singular = std::find(gf.singular.begin(), gf.singular.end(), v) != gf.singular.end();
            double cap = std::numeric_limits<double>::infinity();
            if (!is_singular) {
                double m = 0.0;
                for (int y = 0; y < n; ++y)
                    if (y != v && ctx.distance(v, y) <= gf.scale)
                        m = std::max(m, gf.values[static_cast<std::size_t>(y)]);
                cap = gf.q * m;
            }
            const int r = ctx.regular_layer_above(v);
            if (r >= 0) {
                double m = 0.0;
                for (int y = 0; y < n; ++y)
                    if (y != v && depth[y] <= r + gf.scale)
                        m = std::max(m, gf.values[static_cast<std::size_t>(y)]);
                cap = std::min(cap, gf.q * m);
            }
            if (gf.values[static_cast<std::size_t>(v)] > cap) {
                gf.values[static_cast<std::size_t>(v)] = cap * rng.uniform(0.5, 1.0);
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    return gf;
}

} // namespace anderson
