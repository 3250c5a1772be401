// SPDX-License-Identifier: MIT
#include "hnc/operators.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hnc/symmetry.hpp"

namespace hnc {

namespace {

LabelSet map_set(LabelSet s, const std::vector<Label>& m)
{
    LabelSet out = 0;
    for (Label x : members(s))
        if (m[x]) out |= bit(m[x]);
    return out;
}

// Map that deletes one label and shifts the later ones down.
std::vector<Label> drop_label(int n, Label gone)
{
    std::vector<Label> m(n + 1, 0);
    for (Label x = 1; x <= n; ++x) m[x] = x < gone ? x : (x == gone ? 0 : x - 1);
    return m;
}

EmbedStep finish_embed(EmbedKind kind, Label target, const Network& pre, Network raw, std::vector<Label> map)
{
    EmbedStep st;
    st.kind = kind;
    st.target = target;
    st.pre = pre;
    st.raw = std::move(raw);
    st.raw_map = std::move(map);
    Minimalized m = minimalize(st.raw);
    st.trace = std::move(m.trace);
    st.post = st.trace.end;
    return st;
}

void require_valid(const Network& net, const char* what)
{
    ValidationReport rep = validate_structure(net);
    if (!rep.ok()) throw std::invalid_argument(std::string(what) + ": " + rep.violations.front());
}

}  // namespace

std::string embed_kind_name(EmbedKind k)
{
    switch (k) {
    case EmbedKind::SourceDelete: return "source-delete";
    case EmbedKind::EdgeContract: return "edge-contract";
    case EmbedKind::EdgeDelete: return "edge-delete";
    }
    return "?";
}

std::string EmbedStep::describe() const
{
    return embed_kind_name(kind) + " " + std::to_string(target) + ": " + render(pre) + " -> " + render(post);
}

EmbedStep delete_source(const Network& net, Label s)
{
    require_valid(net, "delete_source");
    if (!net.is_source(s)) throw std::invalid_argument("delete_source: " + std::to_string(s) + " is not a source");
    std::vector<Label> m = drop_label(net.n(), s);
    std::vector<Def> q, w;
    for (const Def& d : net.q) q.push_back({m[d.id], map_set(d.in, m)});
    for (const Def& d : net.w)
        if (d.id != s) w.push_back({m[d.id], map_set(d.in, m)});
    return finish_embed(EmbedKind::SourceDelete, s, net, Network(net.k - 1, net.l, q, w), m);
}

EmbedStep contract_edge(const Network& net, Label e)
{
    require_valid(net, "contract_edge");
    if (!net.is_edge(e)) throw std::invalid_argument("contract_edge: " + std::to_string(e) + " is not an edge");
    LabelSet tail_in = net.edge_def(e)->in;
    std::vector<Label> m = drop_label(net.n(), e);
    auto reroute = [&](LabelSet in) { return has(in, e) ? ((in & ~bit(e)) | tail_in) : in; };
    std::vector<Def> q, w;
    for (const Def& d : net.q)
        if (d.id != e) q.push_back({m[d.id], map_set(reroute(d.in), m)});
    for (const Def& d : net.w) w.push_back({m[d.id], map_set(reroute(d.in), m)});
    return finish_embed(EmbedKind::EdgeContract, e, net, Network(net.k, net.l - 1, q, w), m);
}

EmbedStep delete_edge(const Network& net, Label e)
{
    require_valid(net, "delete_edge");
    if (!net.is_edge(e)) throw std::invalid_argument("delete_edge: " + std::to_string(e) + " is not an edge");
    std::vector<Label> m = drop_label(net.n(), e);
    std::vector<Def> q, w;
    for (const Def& d : net.q)
        if (d.id != e) q.push_back({m[d.id], map_set(d.in, m)});
    for (const Def& d : net.w) w.push_back({m[d.id], map_set(d.in, m)});
    return finish_embed(EmbedKind::EdgeDelete, e, net, Network(net.k, net.l - 1, q, w), m);
}

std::vector<EmbedStep> single_embeddings(const Network& net)
{
    std::vector<EmbedStep> out;
    for (Label s = 1; s <= net.k; ++s) out.push_back(delete_source(net, s));
    for (Label e = net.k + 1; e <= net.n(); ++e) out.push_back(contract_edge(net, e));
    for (Label e = net.k + 1; e <= net.n(); ++e) out.push_back(delete_edge(net, e));
    return out;
}

EmbedTransfer embed_region(const EmbedStep& step, const Region& big, const std::string& tag)
{
    if (big.dim() != step.pre.n()) throw std::invalid_argument("embed_region: region does not match the network");
    std::vector<std::string> names = rate_names(step.raw.k, step.raw.l);
    EmbedTransfer out;
    Region raw_region;
    if (step.kind == EmbedKind::EdgeContract) {
        Region r = simplify(big);
        if (!r.is_cone())
            throw std::domain_error("embed_region: contraction of a non-convex region is not supported");
        std::vector<int> keep;
        for (Label x = 1; x <= step.pre.n(); ++x)
            if (x != step.target) keep.push_back(static_cast<int>(x) - 1);
        Cone c = project(r.cone(), keep);
        std::vector<int> id(keep.size());
        std::iota(id.begin(), id.end(), 0);
        raw_region = Region::of(permute(c, id, names));
        out.one_sided = tag.rfind("scalar", 0) == 0;
    } else {
        // R_target = 0 (or omega_target = 0), then drop the coordinate.
        std::vector<int> coord_of(step.pre.n());
        for (Label x = 1; x <= step.pre.n(); ++x) coord_of[x - 1] = static_cast<int>(step.raw_map[x]) - 1;
        raw_region = substitute(big, names, coord_of);
    }
    out.region = push_region(step.trace, raw_region);
    return out;
}

// ---------------------------------------------------------------------------
// Minor search

namespace {

struct SearchNode {
    Network net;
    int parent = -1;
    EmbedStep step;
};

struct SearchOutcome {
    MinorStatus status = MinorStatus::No;
    int found = -1;
    std::uint64_t expanded = 0;
};

Network canonical_of(const Network& net) { return canonicalize(net).canonical; }

// Breadth-first over canonical minors of start. prune(child) skips a child,
// goal(child) stops the search.
SearchOutcome bfs_minors(std::vector<SearchNode>& nodes, const Network& start, std::uint64_t budget,
                         const std::function<bool(const Network&)>& prune,
                         const std::function<bool(const Network&)>& goal)
{
    SearchOutcome res;
    std::set<std::string> seen;
    nodes.push_back({start, -1, {}});
    seen.insert(render(start));
    std::deque<int> queue{0};
    while (!queue.empty()) {
        if (res.expanded >= budget) {
            res.status = MinorStatus::Unknown;
            return res;
        }
        int cur = queue.front();
        queue.pop_front();
        ++res.expanded;
        Network here = nodes[cur].net;
        for (EmbedStep& st : single_embeddings(here)) {
            Network child = canonical_of(st.post);
            if (prune(child)) continue;
            std::string key = render(child);
            if (!seen.insert(key).second) continue;
            nodes.push_back({child, cur, std::move(st)});
            int idx = static_cast<int>(nodes.size()) - 1;
            if (goal(child)) {
                res.status = MinorStatus::Yes;
                res.found = idx;
                return res;
            }
            queue.push_back(idx);
        }
    }
    res.status = MinorStatus::No;
    return res;
}

std::vector<EmbedStep> path_to(const std::vector<SearchNode>& nodes, int idx)
{
    std::vector<EmbedStep> out;
    for (int i = idx; i > 0; i = nodes[i].parent) out.push_back(nodes[i].step);
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

MinorResult is_minor(const Network& small, const Network& big, std::uint64_t budget)
{
    Network target = canonical_of(small);
    Network start = canonical_of(big);
    MinorResult out;
    if (target == start) {
        out.status = MinorStatus::Yes;
        return out;
    }
    if (target.k > start.k || target.l > start.l) return out;
    std::vector<SearchNode> nodes;
    SearchOutcome r = bfs_minors(
        nodes, start, budget, [&](const Network& c) { return c.k < target.k || c.l < target.l; },
        [&](const Network& c) { return c == target; });
    out.status = r.status;
    out.expanded = r.expanded;
    if (r.status == MinorStatus::Yes) out.witness = path_to(nodes, r.found);
    return out;
}

std::string minor_class_name(MinorClass c)
{
    switch (c) {
    case MinorClass::HasSmallerMinor: return "has-smaller-minor";
    case MinorClass::NewForbiddenMinor: return "new-forbidden-minor";
    case MinorClass::Unknown: return "unknown";
    }
    return "?";
}

std::vector<ForbiddenMinorEntry> forbidden_minor_filter(const std::vector<Network>& insufficient, std::uint64_t budget)
{
    std::set<std::string> keys;
    for (const Network& n : insufficient) keys.insert(render(canonical_of(n)));
    std::vector<ForbiddenMinorEntry> out;
    for (const Network& n : insufficient) {
        ForbiddenMinorEntry e;
        e.net = canonical_of(n);
        std::vector<SearchNode> nodes;
        SearchOutcome r = bfs_minors(
            nodes, e.net, budget, [](const Network& c) { return c.empty(); },
            [&](const Network& c) { return keys.count(render(c)) > 0; });
        if (r.status == MinorStatus::Yes) {
            e.cls = MinorClass::HasSmallerMinor;
            e.minor = nodes[r.found].net;
            e.witness = path_to(nodes, r.found);
        } else {
            e.cls = r.status == MinorStatus::No ? MinorClass::NewForbiddenMinor : MinorClass::Unknown;
        }
        out.push_back(std::move(e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Combination

std::string combine_kind_name(CombineKind k)
{
    switch (k) {
    case CombineKind::SourceMerge: return "source-merge";
    case CombineKind::SinkMerge: return "sink-merge";
    case CombineKind::NodeMerge: return "node-merge";
    case CombineKind::EdgeMerge: return "edge-merge";
    }
    return "?";
}

std::string CombineStep::describe() const
{
    std::ostringstream os;
    os << combine_kind_name(kind) << " [";
    for (std::size_t i = 0; i < pairing.size(); ++i)
        os << (i ? "," : "") << pairing[i].first << ":" << pairing[i].second;
    os << "] " << render(left) << " + " << render(right) << " -> " << render(result);
    return os.str();
}

namespace {

// Labels of the merged network before canonical relabeling.
struct Rebase {
    int k = 0, l = 0;
    std::vector<Label> lm, rm;  // operand label -> raw label
};

// Sources of b not in `paired` follow a's sources; edges of a then b follow,
// skipping the two skipped edges.
Rebase rebase(const Network& a, const Network& b, const std::vector<std::pair<Label, Label>>& paired_sources,
              Label skip_a = 0, Label skip_b = 0)
{
    Rebase r;
    r.k = a.k + b.k - static_cast<int>(paired_sources.size());
    r.l = a.l + b.l - (skip_a ? 1 : 0) - (skip_b ? 1 : 0);
    r.lm.assign(a.n() + 1, 0);
    r.rm.assign(b.n() + 1, 0);
    for (Label s = 1; s <= a.k; ++s) r.lm[s] = s;
    Label next = a.k + 1;
    for (Label s = 1; s <= b.k; ++s) {
        auto it = std::find_if(paired_sources.begin(), paired_sources.end(), [&](auto& p) { return p.second == s; });
        r.rm[s] = it != paired_sources.end() ? it->first : next++;
    }
    next = r.k + 1;
    for (Label e = a.k + 1; e <= a.n(); ++e)
        if (e != skip_a) r.lm[e] = next++;
    for (Label e = b.k + 1; e <= b.n(); ++e)
        if (e != skip_b) r.rm[e] = next++;
    return r;
}

void append_mapped(const Network& net, const std::vector<Label>& m, std::vector<Def>& q, std::vector<Def>& w)
{
    for (const Def& d : net.q)
        if (m[d.id]) q.push_back({m[d.id], map_set(d.in, m)});
    for (const Def& d : net.w) w.push_back({m[d.id], map_set(d.in, m)});
}

CombineStep finish_combine(CombineKind kind, const Network& a, const Network& b,
                           std::vector<std::pair<int, int>> pairing, Network raw, const Rebase& rb)
{
    CombineStep st;
    st.kind = kind;
    st.left = a;
    st.right = b;
    st.pairing = std::move(pairing);
    st.raw = std::move(raw);
    Permutation w = Permutation::identity(st.raw.k, st.raw.l);
    try {
        Canonical c = canonicalize(st.raw);
        st.result = c.canonical;
        w = c.witness;
        st.canonical = true;
    } catch (const std::length_error&) {
        st.result = st.raw;
    }
    st.left_map.assign(rb.lm.size(), 0);
    st.right_map.assign(rb.rm.size(), 0);
    for (std::size_t x = 1; x < rb.lm.size(); ++x)
        if (rb.lm[x]) st.left_map[x] = w(rb.lm[x]);
    for (std::size_t x = 1; x < rb.rm.size(); ++x)
        if (rb.rm[x]) st.right_map[x] = w(rb.rm[x]);
    if (kind == CombineKind::EdgeMerge) {
        Label first = static_cast<Label>(st.raw.n() - 3);
        for (int i = 0; i < 4; ++i) st.new_edges[i] = w(static_cast<Label>(first + i));
    }
    return st;
}

void require_operands(const Network& a, const Network& b)
{
    require_valid(a, "merge: left operand");
    require_valid(b, "merge: right operand");
    if (a.empty() || b.empty()) throw std::invalid_argument("merge: operands must be non-empty");
}

}  // namespace

CombineStep merge_sources(const Network& a, const Network& b, const std::vector<std::pair<Label, Label>>& pairs)
{
    require_operands(a, b);
    if (pairs.empty()) throw std::invalid_argument("merge_sources: empty pairing");
    std::set<Label> seen_a, seen_b;
    for (auto [x, y] : pairs) {
        if (!a.is_source(x) || !b.is_source(y)) throw std::invalid_argument("merge_sources: pairing must pair sources");
        if (!seen_a.insert(x).second || !seen_b.insert(y).second)
            throw std::invalid_argument("merge_sources: pairing is not injective");
    }
    Rebase rb = rebase(a, b, pairs);
    std::vector<Def> q, w;
    append_mapped(a, rb.lm, q, w);
    append_mapped(b, rb.rm, q, w);
    std::vector<std::pair<int, int>> p(pairs.begin(), pairs.end());
    return finish_combine(CombineKind::SourceMerge, a, b, p, Network(rb.k, rb.l, q, w), rb);
}

CombineStep merge_sinks(const Network& a, const Network& b, const std::vector<std::pair<int, int>>& pairs)
{
    require_operands(a, b);
    if (pairs.empty()) throw std::invalid_argument("merge_sinks: empty pairing");
    NodeView va = node_view(a), vb = node_view(b);
    std::set<int> seen_a, seen_b;
    for (auto [i, j] : pairs) {
        if (i < 0 || j < 0 || i >= static_cast<int>(va.sink_in.size()) || j >= static_cast<int>(vb.sink_in.size()))
            throw std::invalid_argument("merge_sinks: sink index out of range");
        if (!seen_a.insert(i).second || !seen_b.insert(j).second)
            throw std::invalid_argument("merge_sinks: pairing is not injective");
    }
    Rebase rb = rebase(a, b, {});
    std::vector<Def> q, w;
    append_mapped(a, rb.lm, q, w);
    append_mapped(b, rb.rm, q, w);
    for (auto [i, j] : pairs) {
        LabelSet ia = map_set(va.sink_in[i], rb.lm), ib = map_set(vb.sink_in[j], rb.rm);
        for (Def& d : w)
            if (d.in == ia || d.in == ib) d.in = ia | ib;
    }
    return finish_combine(CombineKind::SinkMerge, a, b, pairs, Network(rb.k, rb.l, q, w), rb);
}

CombineStep merge_nodes(const Network& a, int g, const Network& b, int g2)
{
    require_operands(a, b);
    NodeView va = node_view(a), vb = node_view(b);
    if (g < 0 || g2 < 0 || g >= static_cast<int>(va.node_in.size()) || g2 >= static_cast<int>(vb.node_in.size()))
        throw std::invalid_argument("merge_nodes: node index out of range");
    Rebase rb = rebase(a, b, {});
    std::vector<Def> q, w;
    append_mapped(a, rb.lm, q, w);
    append_mapped(b, rb.rm, q, w);
    LabelSet ia = map_set(va.node_in[g], rb.lm), ib = map_set(vb.node_in[g2], rb.rm);
    for (Def& d : q)
        if (d.in == ia || d.in == ib) d.in = ia | ib;
    return finish_combine(CombineKind::NodeMerge, a, b, {{g, g2}}, Network(rb.k, rb.l, q, w), rb);
}

CombineStep merge_edges(const Network& a, Label e, const Network& b, Label e2)
{
    require_operands(a, b);
    if (!a.is_edge(e) || !b.is_edge(e2)) throw std::invalid_argument("merge_edges: both labels must be edges");
    Rebase rb = rebase(a, b, {}, e, e2);
    rb.l += 4;
    Label ea = rb.k + rb.l - 3, eb = ea + 1, ec = ea + 2, ed = ea + 3;
    // Inputs that read the merged edges read the new outgoing edges instead.
    std::vector<Label> la = rb.lm, lb = rb.rm;
    la[e] = ec;
    lb[e2] = ed;
    std::vector<Def> q, w;
    for (const Def& d : a.q)
        if (d.id != e) q.push_back({la[d.id], map_set(d.in, la)});
    for (const Def& d : b.q)
        if (d.id != e2) q.push_back({lb[d.id], map_set(d.in, lb)});
    for (const Def& d : a.w) w.push_back({la[d.id], map_set(d.in, la)});
    for (const Def& d : b.w) w.push_back({lb[d.id], map_set(d.in, lb)});
    q.push_back({ea, map_set(a.edge_def(e)->in, la)});
    q.push_back({eb, map_set(b.edge_def(e2)->in, lb)});
    q.push_back({ec, bit(ea) | bit(eb)});
    q.push_back({ed, bit(ea) | bit(eb)});
    return finish_combine(CombineKind::EdgeMerge, a, b, {{static_cast<int>(e), static_cast<int>(e2)}},
                          Network(rb.k, rb.l, q, w), rb);
}

std::pair<int, int> predicted_size(CombineKind kind, const Network& a, const Network& b, int pairs)
{
    switch (kind) {
    case CombineKind::SourceMerge: return {a.k + b.k - pairs, a.l + b.l};
    case CombineKind::SinkMerge:
    case CombineKind::NodeMerge: return {a.k + b.k, a.l + b.l};
    case CombineKind::EdgeMerge: return {a.k + b.k, a.l + b.l + 2};
    }
    return {0, 0};
}

Region combine_region(const CombineStep& step, const Region& left, const Region& right)
{
    if (left.dim() != step.left.n() || right.dim() != step.right.n())
        throw std::invalid_argument("combine_region: operand regions do not match the operands");
    int n = step.result.n();
    std::vector<std::string> names = rate_names(step.result.k, step.result.l);
    Region prod = region_product(left, right);
    std::vector<int> coord_of;
    bool edge = step.kind == CombineKind::EdgeMerge;
    // Edge merge: the two merged edge rates become extra coordinates n, n+1.
    for (std::size_t x = 1; x < step.left_map.size(); ++x)
        coord_of.push_back(step.left_map[x] ? static_cast<int>(step.left_map[x]) - 1 : n);
    for (std::size_t x = 1; x < step.right_map.size(); ++x)
        coord_of.push_back(step.right_map[x] ? static_cast<int>(step.right_map[x]) - 1 : n + 1);
    if (!edge) return substitute(prod, names, coord_of);

    std::vector<std::string> ext = names;
    ext.push_back("x_left");
    ext.push_back("x_right");
    Region r = simplify(substitute(prod, ext, coord_of));
    if (!r.is_cone()) throw std::domain_error("combine_region: edge merge of a non-convex region is not supported");
    auto ge = [&](Label big, int small) {
        Vec v(n + 2, 0);
        v[big - 1] = 1;
        v[small] = -1;
        return v;
    };
    const auto& ne = step.new_edges;
    Cone c = intersect(r.cone(), {ge(ne[0], n), ge(ne[2], n), ge(ne[1], n + 1), ge(ne[3], n + 1)}, {});
    std::vector<int> keep(n);
    std::iota(keep.begin(), keep.end(), 0);
    return Region::of(project(c, keep));
}

void for_each_merge(const Network& a, const Network& b, int k_max, int l_max,
                    const std::function<void(const CombineStep&)>& fn, int max_source_pairs)
{
    auto fits = [&](CombineKind kind, int pairs) {
        auto [k, l] = predicted_size(kind, a, b, pairs);
        return k <= k_max && l <= l_max;
    };
    // Injective partial maps of size p from {0..na-1} to {0..nb-1}.
    auto pairings = [](int na, int nb, int p, const std::function<void(const std::vector<std::pair<int, int>>&)>& f) {
        std::vector<int> pick(nb);
        std::iota(pick.begin(), pick.end(), 0);
        for (std::uint32_t sa = 0; sa < (1U << na); ++sa) {
            if (__builtin_popcount(sa) != p) continue;
            std::vector<int> left;
            for (int i = 0; i < na; ++i)
                if (sa >> i & 1U) left.push_back(i);
            for (std::uint32_t sb = 0; sb < (1U << nb); ++sb) {
                if (__builtin_popcount(sb) != p) continue;
                std::vector<int> right;
                for (int j = 0; j < nb; ++j)
                    if (sb >> j & 1U) right.push_back(j);
                do {
                    std::vector<std::pair<int, int>> pr;
                    for (int t = 0; t < p; ++t) pr.push_back({left[t], right[t]});
                    f(pr);
                } while (std::next_permutation(right.begin(), right.end()));
            }
        }
    };
    int source_cap = max_source_pairs > 0 ? std::min({a.k, b.k, max_source_pairs}) : std::min(a.k, b.k);
    for (int p = 1; p <= source_cap; ++p) {
        if (!fits(CombineKind::SourceMerge, p)) continue;
        pairings(a.k, b.k, p, [&](const std::vector<std::pair<int, int>>& pr) {
            std::vector<std::pair<Label, Label>> lp;
            for (auto [i, j] : pr) lp.push_back({static_cast<Label>(i + 1), static_cast<Label>(j + 1)});
            fn(merge_sources(a, b, lp));
        });
    }
    NodeView va = node_view(a), vb = node_view(b);
    if (fits(CombineKind::SinkMerge, 0)) {
        int ta = static_cast<int>(va.sink_in.size()), tb = static_cast<int>(vb.sink_in.size());
        for (int p = 1; p <= std::min(ta, tb); ++p)
            pairings(ta, tb, p, [&](const std::vector<std::pair<int, int>>& pr) { fn(merge_sinks(a, b, pr)); });
    }
    if (fits(CombineKind::NodeMerge, 0))
        for (int g = 0; g < static_cast<int>(va.node_in.size()); ++g)
            for (int h = 0; h < static_cast<int>(vb.node_in.size()); ++h) fn(merge_nodes(a, g, b, h));
    if (fits(CombineKind::EdgeMerge, 0))
        for (Label e = a.k + 1; e <= a.n(); ++e)
            for (Label f = b.k + 1; f <= b.n(); ++f) fn(merge_edges(a, e, b, f));
}

// ---------------------------------------------------------------------------
// Closure

std::size_t ClosureResult::count(int k, int l) const
{
    return static_cast<std::size_t>(
        std::count_if(networks.begin(), networks.end(), [&](const ClosureRecord& r) { return r.net.k == k && r.net.l == l; }));
}

namespace {

struct BudgetExhausted {};

bool size_then_key_less(const Network& a, const Network& b)
{
    if (a.k != b.k) return a.k < b.k;
    if (a.l != b.l) return a.l < b.l;
    return network_less(a, b);
}

std::string pairing_str(const std::vector<std::pair<int, int>>& p)
{
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i)
        s += (i ? "," : "") + std::to_string(p[i].first) + ":" + std::to_string(p[i].second);
    return s;
}

}  // namespace

ClosureResult closure(const ClosureConfig& cfg, const std::function<void(const std::string&)>& progress)
{
    ClosureResult res;
    std::map<std::string, std::size_t> index;  // key -> position in res.networks
    std::vector<std::size_t> prev_add;
    for (const Network& s : cfg.seeds) {
        if (s.k > cfg.k_max || s.l > cfg.l_max)
            throw std::invalid_argument("closure: seed " + render(s) + " exceeds the size caps");
        Network c = canonical_of(s);
        std::string key = render(c);
        if (index.count(key)) continue;
        index[key] = res.networks.size();
        res.networks.push_back({c, 0, "seed", {}, ""});
    }
    // Seeds are processed in key order so the result does not depend on seed order.
    std::sort(res.networks.begin(), res.networks.end(),
              [](const ClosureRecord& x, const ClosureRecord& y) { return size_then_key_less(x.net, y.net); });
    for (std::size_t i = 0; i < res.networks.size(); ++i) {
        index[render(res.networks[i].net)] = i;
        prev_add.push_back(i);
    }

    int generation = 0;
    try {
        while (!prev_add.empty()) {
            ++generation;
            std::map<std::string, ClosureRecord> cur_add;
            auto admit = [&](const Network& candidate, ClosureRecord rec) {
                if (candidate.empty()) return;
                Network c = canonical_of(candidate);
                std::string key = render(c);
                if (index.count(key) || cur_add.count(key)) return;
                rec.net = c;
                rec.generation = generation;
                cur_add.emplace(key, std::move(rec));
            };
            std::set<std::size_t> fresh(prev_add.begin(), prev_add.end());
            std::size_t listed = res.networks.size();
            for (std::size_t i : prev_add)
                for (std::size_t j = 0; j < listed; ++j) {
                    // Each unordered pair once; merges are symmetric up to relabeling.
                    if (fresh.count(j) && j < i) continue;
                    const Network& a = res.networks[i].net;
                    const Network& b = res.networks[j].net;
                    for_each_merge(a, b, cfg.k_max, cfg.l_max, [&](const CombineStep& st) {
                        if (++res.attempts > cfg.budget) throw BudgetExhausted{};
                        Minimalized m = minimalize(st.raw);
                        if (!m.trace.is_minimal_end()) return;
                        admit(m.network, {{}, 0, combine_kind_name(st.kind), {render(a), render(b)}, pairing_str(st.pairing)});
                    }, cfg.multi_pair_source_merge ? 0 : 1);
                }
            if (cfg.allow_embedding)
                for (std::size_t i : prev_add) {
                    const Network& a = res.networks[i].net;
                    for (const EmbedStep& st : single_embeddings(a)) {
                        if (++res.attempts > cfg.budget) throw BudgetExhausted{};
                        if (!st.trace.is_minimal_end()) continue;
                        admit(st.post, {{}, 0, embed_kind_name(st.kind), {render(a)}, std::to_string(st.target)});
                    }
                }
            prev_add.clear();
            for (auto& [key, rec] : cur_add) {
                index[key] = res.networks.size();
                prev_add.push_back(res.networks.size());
                res.networks.push_back(std::move(rec));
            }
            res.new_per_generation.push_back(cur_add.size());
            if (progress)
                progress("generation " + std::to_string(generation) + ": " + std::to_string(cur_add.size()) +
                         " new, " + std::to_string(res.networks.size()) + " total");
        }
    } catch (const BudgetExhausted&) {
        res.converged = false;
    }
    return res;
}

std::string closure_provenance(const ClosureResult& r)
{
    std::ostringstream os;
    for (const ClosureRecord& rec : r.networks) {
        nlohmann::json j;
        j["result_key"] = render(rec.net);
        j["op_kind"] = rec.op;
        j["operand_keys"] = rec.operands;
        j["pairing"] = rec.pairing;
        j["generation"] = rec.generation;
        os << j.dump() << '\n';
    }
    return os.str();
}

}  // namespace hnc
