// SPDX-License-Identifier: MIT
#include "hnc/bounds.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "hnc/minimality.hpp"

namespace hnc {

std::vector<std::string> entropy_names(int n)
{
    std::vector<std::string> names;
    for (std::uint32_t m = 1; m < (1U << n); ++m) {
        std::string s = "h";
        bool first = true;
        for (int i = 0; i < n; ++i)
            if (m >> i & 1U) {
                s += (first ? "" : ".") + std::to_string(i + 1);
                first = false;
            }
        names.push_back(s);
    }
    return names;
}

namespace {

void check_vars(int n)
{
    if (n < 0 || n > kMaxEntropyVars)
        throw std::length_error("entropy space with " + std::to_string(n) + " variables exceeds the cap of " +
                                std::to_string(kMaxEntropyVars));
}

Vec row(int n, std::initializer_list<std::pair<std::uint32_t, int>> terms)
{
    Vec v((std::size_t{1} << n) - 1, 0);
    for (auto [m, c] : terms)
        if (m) v[m - 1] += c;
    return v;
}

}  // namespace

Cone shannon_cone(int n)
{
    check_vars(n);
    if (n < 1) throw std::invalid_argument("shannon_cone: need at least one variable");
    Cone c(entropy_names(n));
    std::uint32_t all = (1U << n) - 1;
    for (int i = 0; i < n; ++i) c.ineqs.push_back(row(n, {{all, 1}, {all & ~(1U << i), -1}}));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::uint32_t ij = (1U << i) | (1U << j);
            for (std::uint32_t k = 0; k <= all; ++k) {
                if (k & ij) continue;
                c.ineqs.push_back(row(n, {{k | 1U << i, 1}, {k | 1U << j, 1}, {k | ij, -1}, {k, -1}}));
            }
        }
    return c;
}

Cone shannon_cone_full(int n)
{
    check_vars(n);
    Cone c(entropy_names(n));
    std::uint32_t all = (1U << n) - 1;
    for (std::uint32_t b = 1; b <= all; ++b)
        for (std::uint32_t a = b;; a = (a - 1) & b) {
            if (a != b) c.ineqs.push_back(row(n, {{b, 1}, {a, -1}}));
            if (a == 0) break;
        }
    for (std::uint32_t a = 1; a <= all; ++a)
        for (std::uint32_t b = a + 1; b <= all; ++b) {
            Vec v = row(n, {{a, 1}, {b, 1}, {a | b, -1}, {a & b, -1}});
            if (!is_zero(v)) c.ineqs.push_back(std::move(v));
        }
    return c;
}

std::vector<Vec> ingleton_inequalities()
{
    // r(A)+r(B)+r(CD)+r(ABC)+r(ABD) <= r(AB)+r(AC)+r(AD)+r(BC)+r(BD), one
    // instance per choice of the unordered pair {A,B}.
    std::vector<Vec> out;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            int cd[2], t = 0;
            for (int x = 0; x < 4; ++x)
                if (x != a && x != b) cd[t++] = x;
            std::uint32_t A = 1U << a, B = 1U << b, C = 1U << cd[0], D = 1U << cd[1];
            out.push_back(row(4, {{A | B, 1},
                                  {A | C, 1},
                                  {A | D, 1},
                                  {B | C, 1},
                                  {B | D, 1},
                                  {A, -1},
                                  {B, -1},
                                  {C | D, -1},
                                  {A | B | C, -1},
                                  {A | B | D, -1}}));
        }
    return out;
}

std::vector<EntropyForm> NetworkConstraints::equalities() const
{
    std::vector<EntropyForm> out = l1;
    out.insert(out.end(), l3.begin(), l3.end());
    out.insert(out.end(), l5.begin(), l5.end());
    return out;
}

namespace {

std::uint32_t vars_of(LabelSet s)
{
    // Label i is variable i, stored at bit i-1.
    return static_cast<std::uint32_t>(s >> 1);
}

void push_form(std::vector<EntropyForm>& dst, EntropyForm f)
{
    // Drop zero terms after merging equal masks.
    std::sort(f.begin(), f.end());
    EntropyForm merged;
    for (auto [m, c] : f) {
        if (m == 0) continue;
        if (!merged.empty() && merged.back().first == m) merged.back().second += c;
        else merged.push_back({m, c});
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](auto& t) { return t.second == 0; }), merged.end());
    if (!merged.empty()) dst.push_back(std::move(merged));
}

}  // namespace

NetworkConstraints network_constraints(const Network& net)
{
    ValidationReport rep = validate_structure(net);
    if (!rep.ok()) throw std::invalid_argument("network constraints: " + rep.violations.front());
    NetworkConstraints nc;
    nc.n = net.n();
    std::uint32_t sources = vars_of(net.sources());
    if (net.k >= 2) {
        EntropyForm f{{sources, 1}};
        for (Label s = 1; s <= net.k; ++s) f.push_back({vars_of(bit(s)), -1});
        push_form(nc.l1, f);
    }
    NodeView nv = node_view(net);
    for (std::size_t g = 0; g < nv.node_in.size(); ++g) {
        std::uint32_t in = vars_of(nv.node_in[g]);
        std::uint32_t out = vars_of(nv.node_out[g]);
        push_form(nc.l3, {{in | out, 1}, {in, -1}});
    }
    for (std::size_t t = 0; t < nv.sink_in.size(); ++t) {
        std::uint32_t in = vars_of(nv.sink_in[t]);
        std::uint32_t dem = vars_of(nv.sink_demand[t]);
        push_form(nc.l5, {{in | dem, 1}, {in, -1}});
    }
    for (Label e = net.k + 1; e <= net.n(); ++e) nc.l4_edges.push_back(e);
    return nc;
}

NetworkConstraints constraint_set(const Network& net)
{
    if (!is_minimal(net)) throw std::invalid_argument("constraint_set: network is not minimal; reduce it first");
    return network_constraints(net);
}

Vec dense(const EntropyForm& f, int n)
{
    Vec v((std::size_t{1} << n) - 1, 0);
    for (auto [m, c] : f) v[m - 1] += c;
    return v;
}

namespace {

std::vector<Vec> rate_unit_rays(const Network& net)
{
    std::vector<Vec> out;
    for (Label e = net.k + 1; e <= net.n(); ++e) {
        Vec u(net.n(), 0);
        u[e - 1] = 1;
        out.push_back(std::move(u));
    }
    return out;
}

// The rate point of an entropy vector: (h_s for sources, h_e for edges).
template <class Get>
Vec rate_point(int n, Get&& h)
{
    Vec p(n);
    for (int i = 0; i < n; ++i) p[i] = h(1U << i);
    return p;
}

Region empty_space_region() { return Region::of(Cone(std::vector<std::string>{})); }

Region hull_of_points(const Network& net, std::vector<Vec> points)
{
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    auto units = rate_unit_rays(net);
    points.insert(points.end(), units.begin(), units.end());
    return Region::of(conic_hull(rate_names(net.k, net.l), points));
}

}  // namespace

Region region_from_entropy_cone(const Network& net, const Cone& c)
{
    int n = net.n();
    if (n == 0) return empty_space_region();
    check_vars(n);
    if (c.dim() != (1 << n) - 1) throw std::invalid_argument("entropy cone has the wrong dimension");
    NetworkConstraints nc = network_constraints(net);
    std::vector<Vec> eqs;
    for (const EntropyForm& f : nc.equalities()) eqs.push_back(dense(f, n));
    Generators g = extreme_rays(intersect(c, {}, eqs));
    std::vector<Vec> points;
    for (const Vec& r : g.rays) points.push_back(rate_point(n, [&](std::uint32_t m) { return r[m - 1]; }));
    // A cone with lines (none for entropy cones) maps lines to lines.
    std::vector<Vec> lines;
    for (const Vec& l : g.lineality) lines.push_back(rate_point(n, [&](std::uint32_t m) { return l[m - 1]; }));
    if (!lines.empty()) {
        auto units = rate_unit_rays(net);
        points.insert(points.end(), units.begin(), units.end());
        return Region::of(conic_hull(rate_names(net.k, net.l), points, lines));
    }
    return hull_of_points(net, std::move(points));
}

Region outer_region(const Network& net)
{
    if (net.n() == 0) return empty_space_region();
    check_vars(net.n());
    return region_from_entropy_cone(net, shannon_cone(net.n()));
}

Region ingleton_region(const Network& net)
{
    if (net.n() != 4) throw std::invalid_argument("ingleton_region: needs exactly four variables");
    Cone c = intersect(shannon_cone(4), ingleton_inequalities(), {});
    return region_from_entropy_cone(net, c);
}

// ---------------------------------------------------------------------------
// Binary matroids

namespace {

struct Level {
    std::vector<std::uint8_t> rank;     // per subset mask of the first m elements
    std::vector<std::uint8_t> basis;    // 8 bytes per mask: xor basis by pivot bit
};

std::uint8_t reduce(const std::uint8_t* basis, std::uint8_t v)
{
    while (v) {
        int p = 7 - __builtin_clz(static_cast<unsigned>(v)) + 24;
        if (!basis[p]) return v;
        v ^= basis[p];
    }
    return 0;
}

void extend(const Level& cur, int m, std::uint8_t col, Level& next)
{
    std::size_t half = std::size_t{1} << m;
    next.rank.resize(2 * half);
    next.basis.resize(16 * half);
    std::copy(cur.rank.begin(), cur.rank.end(), next.rank.begin());
    std::copy(cur.basis.begin(), cur.basis.end(), next.basis.begin());
    for (std::size_t a = 0; a < half; ++a) {
        const std::uint8_t* b = &cur.basis[8 * a];
        std::uint8_t* nb = &next.basis[8 * (a + half)];
        std::copy(b, b + 8, nb);
        std::uint8_t v = reduce(b, col);
        if (v) {
            int p = 7 - __builtin_clz(static_cast<unsigned>(v)) + 24;
            nb[p] = v;
            next.rank[a + half] = static_cast<std::uint8_t>(cur.rank[a] + 1);
        } else {
            next.rank[a + half] = cur.rank[a];
        }
    }
}

void dfs(int m, int target, int r, std::vector<Level>& levels, RankVector& out,
         const std::function<void(const RankVector&)>& fn)
{
    if (m == target) {
        out.assign(levels[m].rank.begin() + 1, levels[m].rank.end());
        fn(out);
        return;
    }
    // Columns in F_2^r (0 is a loop), then a coloop raising the rank.
    for (int v = 0; v < (1 << r); ++v) {
        extend(levels[m], m, static_cast<std::uint8_t>(v), levels[m + 1]);
        dfs(m + 1, target, r, levels, out, fn);
    }
    extend(levels[m], m, static_cast<std::uint8_t>(1U << r), levels[m + 1]);
    dfs(m + 1, target, r + 1, levels, out, fn);
}

}  // namespace

void for_each_binary_matroid(int m, const std::function<void(const RankVector&)>& fn)
{
    if (m < 0 || m > kMaxMatroidGround)
        throw std::length_error("binary matroid enumeration is capped at " + std::to_string(kMaxMatroidGround) +
                                " elements");
    // Binary matroids are uniquely representable, so extending one fixed
    // matrix per matroid by every admissible column never repeats a matroid.
    std::vector<Level> levels(m + 1);
    levels[0].rank.assign(1, 0);
    levels[0].basis.assign(8, 0);
    RankVector out;
    dfs(0, m, 0, levels, out, fn);
}

std::vector<RankVector> matroid_ranks(int m, int q)
{
    if (q != 2) throw std::length_error("only binary matroids (q = 2) are supported");
    std::vector<RankVector> out;
    std::set<RankVector> seen;
    for_each_binary_matroid(m, [&](const RankVector& r) {
        if (seen.insert(r).second) out.push_back(r);
    });
    std::sort(out.begin(), out.end());
    return out;
}

bool satisfies_matroid_axioms(const RankVector& r, int m)
{
    std::size_t full = std::size_t{1} << m;
    if (r.size() != full - 1) return false;
    auto rk = [&](std::size_t a) { return a ? static_cast<int>(r[a - 1]) : 0; };
    for (std::size_t a = 0; a < full; ++a) {
        if (rk(a) > __builtin_popcountll(a)) return false;
        for (int i = 0; i < m; ++i) {
            std::size_t ai = a | (std::size_t{1} << i);
            if (ai == a) continue;
            if (rk(ai) < rk(a) || rk(ai) > rk(a) + 1) return false;  // unit increase, monotone
            for (int j = i + 1; j < m; ++j) {
                std::size_t aj = a | (std::size_t{1} << j);
                if (aj == a) continue;
                std::size_t aij = ai | aj;
                if (rk(ai) + rk(aj) < rk(aij) + rk(a)) return false;  // local submodularity
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Inner bounds

namespace {

struct Filter {
    std::vector<EntropyForm> eqs;
    bool ok(const std::vector<int>& h) const
    {
        for (const EntropyForm& f : eqs) {
            long s = 0;
            for (auto [m, c] : f) s += static_cast<long>(c) * h[m];
            if (s != 0) return false;
        }
        return true;
    }
};

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const
    {
        std::size_t h = 1469598103934665603ULL;
        for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
        return h;
    }
};

// Block sizes of every composition of total into parts positive parts.
void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (parts == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int first = 1; first <= total - parts + 1; ++first) {
        cur.push_back(first);
        compositions(total - first, parts - 1, cur, out);
        cur.pop_back();
    }
}

// Distinct projected rank vectors (indexed by subset mask, entry 0 unused)
// of every binary matroid on `ground` elements through every ordered
// partition into n blocks. They do not depend on the network, so each
// (ground, n) table is built once per process.
const std::vector<std::vector<int>>& projected_ranks(int ground, int n)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({ground, n});
    if (it != cache.end()) return it->second;

    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(ground, n, cur, comps);
    // For each composition, the ground-set mask of every variable subset.
    std::uint32_t full = 1U << n;
    std::vector<std::vector<std::uint32_t>> unions;
    for (const auto& sizes : comps) {
        std::vector<std::uint32_t> block(n);
        int start = 0;
        for (int i = 0; i < n; ++i) {
            block[i] = ((1U << sizes[i]) - 1) << start;
            start += sizes[i];
        }
        std::vector<std::uint32_t> u(full, 0);
        for (std::uint32_t a = 1; a < full; ++a) u[a] = u[a & (a - 1)] | block[__builtin_ctz(a)];
        unions.push_back(std::move(u));
    }
    std::unordered_set<std::vector<int>, VecHash> seen;
    std::vector<int> h(full, 0);
    for_each_binary_matroid(ground, [&](const RankVector& r) {
        for (const auto& u : unions) {
            for (std::uint32_t a = 1; a < full; ++a) h[a] = r[u[a] - 1];
            seen.insert(h);
        }
    });
    std::vector<std::vector<int>> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return cache.emplace(std::make_pair(ground, n), std::move(out)).first->second;
}

Region inner_from_matroids(const Network& net, int ground)
{
    int n = net.n();
    if (n == 0) return empty_space_region();
    check_vars(n);
    if (ground < n) throw std::invalid_argument("vector bound needs at least as many ground elements as variables");
    Filter filter{network_constraints(net).equalities()};
    std::set<Vec> points;
    for (const std::vector<int>& h : projected_ranks(ground, n)) {
        if (!filter.ok(h)) continue;
        Vec p(n);
        for (int i = 0; i < n; ++i) p[i] = h[1U << i];
        points.insert(std::move(p));
    }
    return hull_of_points(net, std::vector<Vec>(points.begin(), points.end()));
}

}  // namespace

Region scalar_inner_region(const Network& net, int q)
{
    if (q != 2) throw std::length_error("only q = 2 is supported");
    return inner_from_matroids(net, net.n());
}

Region vector_inner_region(const Network& net, int q, int ground_size)
{
    if (q != 2) throw std::length_error("only q = 2 is supported");
    if (ground_size > kMaxMatroidGround)
        throw std::length_error("vector bound ground set of " + std::to_string(ground_size) + " exceeds the cap of " +
                                std::to_string(kMaxMatroidGround));
    return inner_from_matroids(net, ground_size);
}

bool valid_bound_tag(const std::string& tag)
{
    if (tag == "outer" || tag == "scalar-2" || tag == "ingleton") return true;
    if (tag.rfind("vector-2-", 0) == 0) {
        std::string rest = tag.substr(9);
        return !rest.empty() && rest.size() <= 2 && std::all_of(rest.begin(), rest.end(), ::isdigit);
    }
    return false;
}

Region compute_bound(const Network& net, const std::string& tag)
{
    if (!valid_bound_tag(tag)) throw std::invalid_argument("unknown bound tag \"" + tag + "\"");
    if (tag == "outer") return outer_region(net);
    if (tag == "scalar-2") return scalar_inner_region(net, 2);
    if (tag == "ingleton") return ingleton_region(net);
    return vector_inner_region(net, 2, std::stoi(tag.substr(9)));
}

RegionBundle sufficiency_report(const Network& net, const std::vector<std::string>& tags)
{
    for (const auto& t : tags)
        if (!valid_bound_tag(t)) throw std::invalid_argument("unknown bound tag \"" + t + "\"");
    RegionBundle b;
    b.key = render(net);
    b.outer = outer_region(net);
    for (const auto& t : tags) {
        if (t == "outer") continue;
        Region r = compute_bound(net, t);
        b.matches_outer[t] = region_equal(r, b.outer);
        b.inner.emplace(t, std::move(r));
    }
    return b;
}

}  // namespace hnc
