#include "anderson/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

namespace anderson {

namespace {

void require_compatible(const Configuration& x, const Configuration& y)
{
    if (x.dim() != y.dim() || x.particles() != y.particles())
        throw GeometryError("configuration dimension mismatch: " + x.to_string() + " vs " + y.to_string());
}

// Kuhn's augmenting-path matching on the bipartite graph {i -> j : allowed[i][j]}.
// Rows already fixed (fixed_row[j] >= 0) are excluded from the search.
class BipartiteMatcher {
public:
    explicit BipartiteMatcher(const std::vector<std::vector<char>>& allowed)
        : allowed_(allowed), n_(static_cast<int>(allowed.size()))
    {
    }

    bool perfect(const std::vector<char>& row_used, const std::vector<char>& col_used)
    {
        match_col_.assign(n_, -1);
        row_used_ = &row_used;
        for (int j = 0; j < n_; ++j) {
            if (col_used[j])
                continue;
            seen_.assign(n_, 0);
            if (!augment(j, col_used))
                return false;
        }
        return true;
    }

private:
    // Try to match column j to some free row.
    bool augment(int j, const std::vector<char>& col_used)
    {
        for (int i = 0; i < n_; ++i) {
            if ((*row_used_)[i] || !allowed_[i][j] || seen_[i])
                continue;
            seen_[i] = 1;
            if (match_col_[i] < 0 || augment(match_col_[i], col_used)) {
                match_col_[i] = j;
                return true;
            }
        }
        return false;
    }

    const std::vector<std::vector<char>>& allowed_;
    int n_;
    std::vector<int> match_col_;
    std::vector<char> seen_;
    const std::vector<char>* row_used_ = nullptr;
};

std::vector<std::vector<int>> pair_distances(const Configuration& x, const Configuration& y)
{
    const int n = x.particles();
    std::vector<std::vector<int>> d(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            d[i][j] = site_distance(x.particle(i), y.particle(j));
    return d;
}

std::vector<int> permutation_by_enumeration(const std::vector<std::vector<int>>& d)
{
    const int n = static_cast<int>(d.size());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    int best_cost = std::numeric_limits<int>::max();
    do {
        int cost = 0;
        for (int j = 0; j < n; ++j)
            cost = std::max(cost, d[perm[j]][j]);
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<int> permutation_by_bottleneck(const std::vector<std::vector<int>>& d)
{
    const int n = static_cast<int>(d.size());
    std::vector<int> thresholds;
    for (const auto& row : d)
        thresholds.insert(thresholds.end(), row.begin(), row.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    std::vector<std::vector<char>> allowed(n, std::vector<char>(n));
    auto feasible = [&](int t, const std::vector<char>& row_used, const std::vector<char>& col_used) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                allowed[i][j] = d[i][j] <= t;
        BipartiteMatcher matcher(allowed);
        return matcher.perfect(row_used, col_used);
    };

    std::vector<char> none(n, 0);
    std::size_t lo = 0, hi = thresholds.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (feasible(thresholds[mid], none, none))
            hi = mid;
        else
            lo = mid + 1;
    }
    const int t = thresholds[lo];

    // Lexicographically smallest perfect matching under the threshold t.
    std::vector<int> perm(n, -1);
    std::vector<char> row_used(n, 0), col_used(n, 0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (row_used[i] || d[i][j] > t)
                continue;
            row_used[i] = 1;
            col_used[j] = 1;
            if (feasible(t, row_used, col_used)) {
                perm[j] = i;
                break;
            }
            row_used[i] = 0;
            col_used[j] = 0;
        }
    }
    return perm;
}

enum class Placement { Inside, Outside, Straddles };

Placement place(const Box& box, const Box& q)
{
    if (q.contains(box))
        return Placement::Inside;
    if (!q.intersects(box))
        return Placement::Outside;
    return Placement::Straddles;
}

} // namespace

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(int dim, std::vector<int> coords) : dim_(dim), coords_(std::move(coords))
{
    if (dim < 1)
        throw GeometryError("configuration dimension must be >= 1");
    if (coords_.empty() || coords_.size() % static_cast<std::size_t>(dim) != 0)
        throw GeometryError("coordinate count must be a positive multiple of the dimension");
}

Configuration Configuration::from_sites(const std::vector<Site>& sites)
{
    if (sites.empty())
        throw GeometryError("configuration needs at least one particle");
    const auto d = sites.front().size();
    std::vector<int> coords;
    coords.reserve(sites.size() * d);
    for (const auto& s : sites) {
        if (s.size() != d)
            throw GeometryError("particles of a configuration must share the dimension");
        coords.insert(coords.end(), s.begin(), s.end());
    }
    return Configuration(static_cast<int>(d), std::move(coords));
}

Site Configuration::site(int j) const
{
    auto p = particle(j);
    return Site(p.begin(), p.end());
}

std::vector<Site> Configuration::sites() const
{
    std::vector<Site> out;
    out.reserve(particles());
    for (int j = 0; j < particles(); ++j)
        out.push_back(site(j));
    return out;
}

Configuration Configuration::permuted(std::span<const int> perm) const
{
    if (static_cast<int>(perm.size()) != particles())
        throw GeometryError("permutation size mismatch");
    std::vector<int> coords;
    coords.reserve(coords_.size());
    for (int src : perm) {
        auto p = particle(src);
        coords.insert(coords.end(), p.begin(), p.end());
    }
    return Configuration(dim_, std::move(coords));
}

std::string Configuration::to_string() const
{
    std::ostringstream os;
    os << '(';
    for (int j = 0; j < particles(); ++j) {
        if (j)
            os << ',';
        os << '(';
        auto p = particle(j);
        for (std::size_t k = 0; k < p.size(); ++k)
            os << (k ? "," : "") << p[k];
        os << ')';
    }
    os << ')';
    return os.str();
}

// ---------------------------------------------------------------------------
// Box

bool Box::contains(std::span<const int> p) const
{
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (p[k] < lo[k] || p[k] > hi[k])
            return false;
    return true;
}

bool Box::contains(const Box& other) const
{
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (other.lo[k] < lo[k] || other.hi[k] > hi[k])
            return false;
    return true;
}

bool Box::intersects(const Box& other) const
{
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (other.hi[k] < lo[k] || other.lo[k] > hi[k])
            return false;
    return true;
}

int Box::diameter() const
{
    int diam = 0;
    for (std::size_t k = 0; k < lo.size(); ++k)
        diam = std::max(diam, hi[k] - lo[k]);
    return diam;
}

std::size_t Box::volume() const
{
    std::size_t v = 1;
    for (std::size_t k = 0; k < lo.size(); ++k)
        v *= static_cast<std::size_t>(hi[k] - lo[k] + 1);
    return v;
}

std::vector<Site> Box::sites() const
{
    std::vector<Site> out;
    out.reserve(volume());
    Site cur = lo;
    const int d = dim();
    while (true) {
        out.push_back(cur);
        int k = d - 1;
        while (k >= 0 && cur[k] == hi[k]) {
            cur[k] = lo[k];
            --k;
        }
        if (k < 0)
            break;
        ++cur[k];
    }
    return out;
}

Box bounding_box(std::span<const Box> boxes)
{
    if (boxes.empty())
        throw GeometryError("bounding box of an empty family");
    Box out = boxes.front();
    for (const auto& b : boxes.subspan(1)) {
        for (std::size_t k = 0; k < out.lo.size(); ++k) {
            out.lo[k] = std::min(out.lo[k], b.lo[k]);
            out.hi[k] = std::max(out.hi[k], b.hi[k]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cube

Cube::Cube(Configuration center, int radius) : center_(std::move(center)), radius_(radius)
{
    if (radius < 0)
        throw GeometryError("cube radius must be non-negative");
    if (center_.particles() < 1)
        throw GeometryError("cube center must hold at least one particle");
    volume_ = 1;
    const auto side = static_cast<std::size_t>(2 * radius + 1);
    for (std::size_t k = 0; k < center_.coords().size(); ++k)
        volume_ *= side;
}

bool Cube::contains(const Configuration& x) const
{
    if (x.dim() != dim() || x.particles() != particles())
        return false;
    return max_norm(x, center_) <= radius_;
}

bool Cube::on_boundary(const Configuration& x) const
{
    return contains(x) && max_norm(x, center_) == radius_;
}

Configuration Cube::point(std::size_t index) const
{
    const auto& c = center_.coords();
    std::vector<int> coords(c.size());
    const auto s = static_cast<std::size_t>(side());
    for (std::size_t k = c.size(); k-- > 0;) {
        coords[k] = c[k] - radius_ + static_cast<int>(index % s);
        index /= s;
    }
    return Configuration(dim(), std::move(coords));
}

std::optional<std::size_t> Cube::index_of(const Configuration& x) const
{
    if (!contains(x))
        return std::nullopt;
    const auto& c = center_.coords();
    const auto s = static_cast<std::size_t>(side());
    std::size_t index = 0;
    for (std::size_t k = 0; k < c.size(); ++k)
        index = index * s + static_cast<std::size_t>(x[k] - c[k] + radius_);
    return index;
}

std::vector<Configuration> Cube::points() const
{
    std::vector<Configuration> out;
    out.reserve(volume_);
    for (std::size_t i = 0; i < volume_; ++i)
        out.push_back(point(i));
    return out;
}

std::vector<std::size_t> Cube::boundary_indices() const
{
    std::vector<std::size_t> out;
    const auto s = static_cast<std::size_t>(side());
    const std::size_t nd = center_.coords().size();
    for (std::size_t i = 0; i < volume_; ++i) {
        std::size_t rest = i;
        bool edge = false;
        for (std::size_t k = 0; k < nd; ++k) {
            const auto digit = rest % s;
            rest /= s;
            if (digit == 0 || digit == s - 1)
                edge = true;
        }
        if (edge)
            out.push_back(i);
    }
    return out;
}

Box Cube::particle_box(int j, int extra) const
{
    const int r = radius_ + extra;
    Box box;
    for (int v : center_.particle(j)) {
        box.lo.push_back(v - r);
        box.hi.push_back(v + r);
    }
    return box;
}

std::vector<Site> Cube::projection_sites(int extra) const
{
    std::vector<Site> out;
    for (int j = 0; j < particles(); ++j) {
        auto s = particle_box(j, extra).sites();
        out.insert(out.end(), s.begin(), s.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Distances

int site_distance(std::span<const int> a, std::span<const int> b)
{
    int d = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

int max_norm(const Configuration& x, const Configuration& y)
{
    require_compatible(x, y);
    int d = 0;
    for (std::size_t k = 0; k < x.coords().size(); ++k)
        d = std::max(d, std::abs(x[k] - y[k]));
    return d;
}

std::vector<int> optimal_permutation(const Configuration& x, const Configuration& y, MatchingMode mode)
{
    require_compatible(x, y);
    const auto d = pair_distances(x, y);
    if (mode == MatchingMode::Automatic)
        mode = x.particles() <= 6 ? MatchingMode::Enumeration : MatchingMode::Bottleneck;
    if (mode == MatchingMode::Enumeration) {
        if (x.particles() > 10)
            throw GeometryError("enumeration over permutations is limited to N <= 10");
        return permutation_by_enumeration(d);
    }
    return permutation_by_bottleneck(d);
}

int sym_distance(const Configuration& x, const Configuration& y, MatchingMode mode)
{
    const auto perm = optimal_permutation(x, y, mode);
    int cost = 0;
    for (int j = 0; j < x.particles(); ++j)
        cost = std::max(cost, site_distance(x.particle(perm[j]), y.particle(j)));
    return cost;
}

int hausdorff_distance(const Configuration& x, const Configuration& y)
{
    if (x.dim() != y.dim())
        throw GeometryError("configuration dimension mismatch");
    auto directed = [](const Configuration& a, const Configuration& b) {
        int sup = 0;
        for (int i = 0; i < a.particles(); ++i) {
            int inf = std::numeric_limits<int>::max();
            for (int j = 0; j < b.particles(); ++j)
                inf = std::min(inf, site_distance(a.particle(i), b.particle(j)));
            sup = std::max(sup, inf);
        }
        return sup;
    };
    return std::max(directed(x, y), directed(y, x));
}

int diam_projection(const Configuration& u)
{
    int diam = 0;
    for (int i = 0; i < u.particles(); ++i)
        for (int j = i + 1; j < u.particles(); ++j)
            diam = std::max(diam, site_distance(u.particle(i), u.particle(j)));
    return diam;
}

// ---------------------------------------------------------------------------
// Interactivity

Interactivity classify_wi_si(const Cube& cube)
{
    const int n = cube.particles();
    if (n < 2)
        return Interactivity::Strong;
    return diam_projection(cube.center()) >= 3 * n * cube.radius() ? Interactivity::Weak
                                                                    : Interactivity::Strong;
}

std::vector<int> wi_decompose(const Cube& cube)
{
    if (classify_wi_si(cube) != Interactivity::Weak)
        throw GeometryError("cube is not weakly interactive: " + cube.center().to_string());
    const auto& u = cube.center();
    const int n = u.particles();
    const int link = 3 * cube.radius();

    // Connected component of particle 0 in the proximity graph |u_i - u_j| <= 3L.
    std::vector<char> in(n, 0);
    std::vector<int> stack{0};
    in[0] = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            if (!in[j] && site_distance(u.particle(i), u.particle(j)) <= link) {
                in[j] = 1;
                stack.push_back(j);
            }
        }
    }
    std::vector<int> part;
    for (int j = 0; j < n; ++j)
        if (in[j])
            part.push_back(j);
    return part;
}

// ---------------------------------------------------------------------------
// Weak separation

std::optional<WeakSeparation> weakly_separated(const Cube& cx, const Cube& cy)
{
    if (cx.radius() != cy.radius())
        throw GeometryError("weak separation needs cubes of equal radius");
    require_compatible(cx.center(), cy.center());
    const int n = cx.particles();
    if (2 * n > 20)
        throw GeometryError("weak separation search is limited to N <= 10");
    const int cap = 2 * n * cx.radius();

    std::vector<Box> boxes;
    for (int j = 0; j < n; ++j)
        boxes.push_back(cx.particle_box(j));
    for (int j = 0; j < n; ++j)
        boxes.push_back(cy.particle_box(j));

    const unsigned total = 1u << (2 * n);
    std::vector<Box> chosen;
    for (unsigned mask = 1; mask < total; ++mask) {
        chosen.clear();
        for (int b = 0; b < 2 * n; ++b)
            if (mask & (1u << b))
                chosen.push_back(boxes[b]);
        const Box q = bounding_box(chosen);
        if (q.diameter() > cap)
            continue;

        std::vector<int> in_x, in_y;
        bool straddle = false;
        for (int j = 0; j < n && !straddle; ++j) {
            switch (place(boxes[j], q)) {
            case Placement::Inside: in_x.push_back(j); break;
            case Placement::Straddles: straddle = true; break;
            case Placement::Outside: break;
            }
        }
        for (int j = 0; j < n && !straddle; ++j) {
            switch (place(boxes[n + j], q)) {
            case Placement::Inside: in_y.push_back(j); break;
            case Placement::Straddles: straddle = true; break;
            case Placement::Outside: break;
            }
        }
        if (straddle)
            continue;
        if (in_x.size() > in_y.size())
            return WeakSeparation{q, std::move(in_x), std::move(in_y), true};
        if (in_y.size() > in_x.size())
            return WeakSeparation{q, std::move(in_y), std::move(in_x), false};
    }
    return std::nullopt;
}

bool certificate_valid(const Cube& cx, const Cube& cy, const WeakSeparation& cert)
{
    const Cube& sep = cert.first_separated ? cx : cy;
    const Cube& other = cert.first_separated ? cy : cx;
    if (cert.j1.size() <= cert.j2.size())
        return false;
    if (cert.q.diameter() > 2 * cx.particles() * cx.radius())
        return false;
    auto check = [&](const Cube& cube, const std::vector<int>& inside) {
        for (int j = 0; j < cube.particles(); ++j) {
            const bool want_in = std::find(inside.begin(), inside.end(), j) != inside.end();
            const Box b = cube.particle_box(j);
            if (want_in ? !cert.q.contains(b) : cert.q.intersects(b))
                return false;
        }
        return true;
    };
    return check(sep, cert.j1) && check(other, cert.j2);
}

bool scatterer_supports_disjoint(const Cube& cx, const Cube& cy, int r0)
{
    require_compatible(cx.center(), cy.center());
    if (classify_wi_si(cx) != Interactivity::Strong || classify_wi_si(cy) != Interactivity::Strong)
        throw GeometryError("scatterer support test expects strongly interactive cubes");
    for (int i = 0; i < cx.particles(); ++i)
        for (int j = 0; j < cy.particles(); ++j)
            if (cx.particle_box(i, r0).intersects(cy.particle_box(j, r0)))
                return false;
    return true;
}

} // namespace anderson
