// SPDX-License-Identifier: MIT
#include "hnc/minimality.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hnc {

std::string condition_name(int c) { return "C" + std::to_string(c); }

namespace {

std::string set_str(LabelSet s)
{
    std::string out = "{";
    bool first = true;
    for (Label x : members(s)) {
        if (!first) out += ',';
        out += std::to_string(x);
        first = false;
    }
    return out + "}";
}

// Distinct input sets of intermediate nodes and sinks, with sink demands.
struct Layout {
    std::vector<LabelSet> node_in;
    std::vector<LabelSet> node_out;
    std::vector<LabelSet> sink_in;
    std::vector<LabelSet> sink_dem;

    explicit Layout(const Network& net)
    {
        for (const Def& d : net.q) {
            auto it = std::find(node_in.begin(), node_in.end(), d.in);
            if (it == node_in.end()) {
                node_in.push_back(d.in);
                node_out.push_back(bit(d.id));
            } else {
                node_out[it - node_in.begin()] |= bit(d.id);
            }
        }
        for (const Def& d : net.w) {
            auto it = std::find(sink_in.begin(), sink_in.end(), d.in);
            if (it == sink_in.end()) {
                sink_in.push_back(d.in);
                sink_dem.push_back(bit(d.id));
            } else {
                sink_dem[it - sink_in.begin()] |= bit(d.id);
            }
        }
    }

    // Bitmasks over node and sink indices whose input holds x.
    std::uint64_t node_heads(Label x) const
    {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < node_in.size(); ++i)
            if (has(node_in[i], x)) m |= std::uint64_t{1} << i;
        return m;
    }
    std::uint64_t sink_heads(Label x) const
    {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < sink_in.size(); ++i)
            if (has(sink_in[i], x)) m |= std::uint64_t{1} << i;
        return m;
    }
    std::uint64_t demanders(Label s) const
    {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < sink_in.size(); ++i)
            if (has(sink_dem[i], s)) m |= std::uint64_t{1} << i;
        return m;
    }
};

// Edges reachable from source s along directed paths.
LabelSet reach_from(const Network& net, Label s, const std::vector<Label>& topo)
{
    LabelSet r = bit(s);
    for (Label e : topo) {
        const Def* d = net.edge_def(e);
        if (d && (d->in & r)) r |= bit(e);
    }
    return r & ~bit(s);
}

struct Checker {
    const Network& net;
    Layout lay;
    bool first_only;
    std::vector<Violation> out;

    Checker(const Network& n, bool first) : net(n), lay(n), first_only(first) {}

    bool done() const { return first_only && !out.empty(); }
    void add(int c, std::string w, std::vector<Label> labels)
    {
        out.push_back({c, std::move(w), std::move(labels)});
    }

    void c1()
    {
        for (Label s = 1; s <= net.k && !done(); ++s)
            if (lay.node_heads(s) == 0) add(1, "source " + std::to_string(s) + " feeds no intermediate node", {s});
    }
    void c2()
    {
        for (const Def& d : net.w) {
            if (done()) return;
            if (has(d.in, d.id))
                add(2, "sink " + set_str(d.in) + " demands source " + std::to_string(d.id) + " it reads directly",
                    {d.id});
        }
    }
    void c6()
    {
        for (const Def& d : net.q) {
            if (done()) return;
            if (d.in == 0) add(6, "edge " + std::to_string(d.id) + " leaves a node with no input", {d.id});
        }
        for (std::size_t t = 0; t < lay.sink_in.size() && !done(); ++t)
            if (lay.sink_in[t] == 0) add(6, "a sink has no input and demands " + set_str(lay.sink_dem[t]),
                                         members(lay.sink_dem[t]));
    }
    void c3()
    {
        for (Label s = 1; s <= net.k && !done(); ++s)
            if (lay.demanders(s) == 0) add(3, "source " + std::to_string(s) + " is demanded by no sink", {s});
    }
    void c4()
    {
        for (Label s = 1; s <= net.k && !done(); ++s)
            for (Label u = s + 1; u <= net.k && !done(); ++u)
                if (lay.node_heads(s) == lay.node_heads(u) && lay.sink_heads(s) == lay.sink_heads(u) &&
                    lay.demanders(s) == lay.demanders(u))
                    add(4, "sources " + std::to_string(s) + " and " + std::to_string(u) +
                               " have the same heads and demanders", {s, u});
    }
    void c7()
    {
        for (Label e = net.k + 1; e <= net.n() && !done(); ++e)
            if (lay.node_heads(e) == 0 && lay.sink_heads(e) == 0)
                add(7, "edge " + std::to_string(e) + " has no head", {e});
    }
    void c8()
    {
        for (std::size_t i = 0; i < net.q.size() && !done(); ++i)
            for (std::size_t j = i + 1; j < net.q.size() && !done(); ++j) {
                const Def& a = net.q[i];
                const Def& b = net.q[j];
                if (a.in == b.in && lay.node_heads(a.id) == lay.node_heads(b.id) &&
                    lay.sink_heads(a.id) == lay.sink_heads(b.id)) {
                    Label lo = std::min(a.id, b.id), hi = std::max(a.id, b.id);
                    add(8, "edges " + std::to_string(lo) + " and " + std::to_string(hi) + " are parallel", {lo, hi});
                }
            }
    }
    void c9()
    {
        for (std::size_t g = 0; g < lay.node_in.size() && !done(); ++g) {
            LabelSet in = lay.node_in[g];
            if (popcount(in) != 1 || popcount(lay.node_out[g]) != 1) continue;
            Label e = lowest(in);
            if (!net.is_edge(e)) continue;
            if (lay.node_heads(e) != (std::uint64_t{1} << g) || lay.sink_heads(e) != 0) continue;
            Label out = lowest(lay.node_out[g]);
            add(9, "node " + set_str(in) + " relays edge " + std::to_string(e) + " onto edge " + std::to_string(out),
                {e, out});
        }
    }
    void c10()
    {
        std::vector<Label> topo = topological_edges(net);
        std::vector<LabelSet> reach(net.k + 1, 0);
        for (Label s = 1; s <= net.k; ++s) reach[s] = reach_from(net, s, topo) | bit(s);
        for (const Def& d : net.w) {
            if (done()) return;
            if ((reach[d.id] & d.in) == 0)
                add(10, "sink " + set_str(d.in) + " demands source " + std::to_string(d.id) + " it cannot reach",
                    {d.id});
        }
    }
    void c12_13(int which)
    {
        std::size_t n = lay.sink_in.size();
        for (std::size_t t = 0; t < n && !done(); ++t)
            for (std::size_t u = 0; u < n && !done(); ++u) {
                if (t == u) continue;
                LabelSet a = lay.sink_in[t], b = lay.sink_in[u];
                if ((a & ~b) != 0) continue;  // In(t) is not inside In(u)
                if (which == 12) {
                    LabelSet shared = lay.sink_dem[t] & lay.sink_dem[u];
                    if (shared)
                        add(12, "sink " + set_str(b) + " restates demands " + set_str(shared) + " implied by sink " +
                                    set_str(a), members(shared));
                } else {
                    LabelSet direct = lay.sink_dem[t] & b;
                    if (direct)
                        add(13, "sink " + set_str(b) + " reads sources " + set_str(direct) +
                                    " already decoded by sink " + set_str(a), members(direct));
                }
            }
    }
    void c14()
    {
        if (component_count(net) > 1) add(14, "network is not weakly connected", {});
    }

    static int component_count(const Network& net);

    void run()
    {
        c1();
        if (!done()) c2();
        if (!done()) c6();
        if (!done()) c3();
        if (!done()) c4();
        if (!done()) c7();
        if (!done()) c8();
        if (!done()) c9();
        if (!done()) c10();
        if (!done()) c12_13(12);
        if (!done()) c12_13(13);
        if (!done()) c14();
    }
};

// Union-find over labels 1..n and sink slots n+1..n+#sinks; nodes are
// represented by their output edges, which share a tail.
struct Components {
    std::vector<int> parent;
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

Components connect(const Network& net, const Layout& lay)
{
    int n = net.n();
    int ns = static_cast<int>(lay.sink_in.size());
    Components c;
    c.parent.resize(n + ns + 1);
    std::iota(c.parent.begin(), c.parent.end(), 0);
    for (std::size_t g = 0; g < lay.node_in.size(); ++g) {
        Label rep = lowest(lay.node_out[g]);
        for (Label e : members(lay.node_out[g])) c.unite(e, rep);
        for (Label x : members(lay.node_in[g])) c.unite(x, rep);
    }
    for (int t = 0; t < ns; ++t)
        for (Label x : members(lay.sink_in[t])) c.unite(x, n + 1 + t);
    return c;
}

int Checker::component_count(const Network& net)
{
    Layout lay(net);
    Components c = connect(net, lay);
    int n = net.n() + static_cast<int>(lay.sink_in.size());
    int roots = 0;
    for (int i = 1; i <= n; ++i)
        if (c.find(i) == i) ++roots;
    return roots;
}

// Removes labels, compacting the rest in order. Definitions whose id is
// removed disappear; removed labels leave every input set.
Network compact(const Network& net, LabelSet removed, std::vector<Label>& map)
{
    map.assign(net.n() + 1, 0);
    int k = 0, next = 0;
    for (Label x = 1; x <= net.n(); ++x) {
        if (has(removed, x)) continue;
        map[x] = ++next;
        if (net.is_source(x)) ++k;
    }
    auto remap = [&](LabelSet s) {
        LabelSet o = 0;
        for (Label x : members(s))
            if (map[x]) o |= bit(map[x]);
        return o;
    };
    Network out;
    out.k = k;
    out.l = next - k;
    for (const Def& d : net.q)
        if (map[d.id]) out.q.push_back({map[d.id], remap(d.in)});
    for (const Def& d : net.w)
        if (map[d.id]) out.w.push_back({map[d.id], remap(d.in)});
    out.normalize();
    return out;
}

std::vector<Label> identity_map(int n)
{
    std::vector<Label> m(n + 1);
    std::iota(m.begin(), m.end(), 0);
    return m;
}

ReductionStep make_step(int kind, const Network& before, const Network& after, std::string witness,
                        std::vector<Label> map)
{
    ReductionStep s;
    s.kind = kind;
    s.witness = std::move(witness);
    s.k_before = before.k;
    s.l_before = before.l;
    s.k_after = after.k;
    s.l_after = after.l;
    s.label_map = std::move(map);
    return s;
}

// Applies the reduction for violation v. Returns the reduced network and
// fills step.
Network reduce(const Network& net, const Violation& v, ReductionStep& step)
{
    Layout lay(net);
    std::vector<Label> map;
    Network out;
    switch (v.condition) {
    case 1: {
        Label s = v.labels[0];
        bool zero = false;
        for (const Def& d : net.w)
            if (d.id == s && !has(d.in, s)) zero = true;
        out = compact(net, bit(s), map);
        step = make_step(1, net, out, v.witness + (zero ? "; a demander lacks direct access, rate fixed to 0"
                                                         : "; every demander reads it directly, rate free"),
                         map);
        (zero ? step.zeroed : step.freed).push_back(s);
        return out;
    }
    case 2: {
        out = net;
        Label s = v.labels[0];
        out.w.erase(std::remove_if(out.w.begin(), out.w.end(), [&](const Def& d) { return d.id == s && has(d.in, s); }),
                    out.w.end());
        step = make_step(2, net, out, v.witness, identity_map(net.n()));
        return out;
    }
    case 6: {
        if (v.labels.size() == 1 && net.is_edge(v.labels[0])) {
            Label e = v.labels[0];
            out = compact(net, bit(e), map);
            step = make_step(6, net, out, v.witness, map);
            step.freed.push_back(e);
            return out;
        }
        LabelSet dem = make_set(v.labels);
        out = compact(net, dem, map);
        step = make_step(6, net, out, v.witness, map);
        step.zeroed = v.labels;
        return out;
    }
    case 3:
    case 7: {
        Label x = v.labels[0];
        out = compact(net, bit(x), map);
        step = make_step(v.condition == 3 ? 3 : 7, net, out, v.witness, map);
        step.freed.push_back(x);
        return out;
    }
    case 4:
    case 8: {
        Label keep = v.labels[0], gone = v.labels[1];
        out = compact(net, bit(gone), map);
        step = make_step(v.condition == 4 ? 4 : 8, net, out, v.witness, map);
        step.summed.push_back({keep, gone});
        return out;
    }
    case 9: {
        Label e = v.labels[0], e2 = v.labels[1];
        Network tmp = net;
        tmp.q.erase(std::remove_if(tmp.q.begin(), tmp.q.end(), [&](const Def& d) { return d.id == e2; }),
                    tmp.q.end());
        auto swap_in = [&](LabelSet s) { return has(s, e2) ? ((s & ~bit(e2)) | bit(e)) : s; };
        for (Def& d : tmp.q) d.in = swap_in(d.in);
        for (Def& d : tmp.w) d.in = swap_in(d.in);
        out = compact(tmp, bit(e2), map);
        step = make_step(9, net, out, v.witness, map);
        step.minned.push_back({e, e2});
        return out;
    }
    case 10: {
        Label s = v.labels[0];
        out = compact(net, bit(s), map);
        step = make_step(10, net, out, v.witness, map);
        step.zeroed.push_back(s);
        return out;
    }
    case 12:
    case 13: {
        // Recover the sink pair from the witness labels by searching again.
        std::size_t n = lay.sink_in.size();
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t u = 0; u < n; ++u) {
                if (t == u || (lay.sink_in[t] & ~lay.sink_in[u])) continue;
                LabelSet hit = v.condition == 12 ? (lay.sink_dem[t] & lay.sink_dem[u])
                                                 : (lay.sink_dem[t] & lay.sink_in[u]);
                if (hit != make_set(v.labels)) continue;
                out = net;
                LabelSet target = lay.sink_in[u];
                if (v.condition == 12) {
                    out.w.erase(std::remove_if(out.w.begin(), out.w.end(),
                                               [&](const Def& d) { return d.in == target && has(hit, d.id); }),
                                out.w.end());
                } else {
                    Label s = lowest(hit);
                    for (Def& d : out.w)
                        if (d.in == target) d.in &= ~bit(s);
                }
                out.normalize();
                step = make_step(v.condition, net, out, v.witness, identity_map(net.n()));
                return out;
            }
        throw std::logic_error("sink pair for " + condition_name(v.condition) + " not found");
    }
    default:
        throw std::logic_error("no reduction for " + condition_name(v.condition));
    }
}

std::vector<Component> split_components(const Network& net)
{
    Layout lay(net);
    Components c = connect(net, lay);
    int n = net.n();
    std::map<int, LabelSet> groups;  // root -> labels
    for (Label x = 1; x <= n; ++x) groups[c.find(x)] |= bit(x);
    std::vector<LabelSet> parts;
    for (auto& [root, set] : groups) parts.push_back(set);
    std::sort(parts.begin(), parts.end(), [](LabelSet a, LabelSet b) { return lowest(a) < lowest(b); });

    std::vector<Component> out;
    LabelSet all = label_range(1, n);
    for (LabelSet part : parts) {
        Component comp;
        Network reduced = compact(net, all & ~part, comp.label_map);
        // Sinks whose inputs left entirely belong to other parts.
        reduced.w.erase(std::remove_if(reduced.w.begin(), reduced.w.end(), [](const Def& d) { return d.in == 0; }),
                        reduced.w.end());
        comp.net = reduced;
        out.push_back(std::move(comp));
    }
    return out;
}

}  // namespace

std::vector<Violation> check_conditions(const Network& net)
{
    ValidationReport rep = validate_structure(net);
    if (!rep.ok()) throw std::invalid_argument("check_conditions: " + rep.violations.front());
    Checker c(net, false);
    c.run();
    return c.out;
}

bool is_minimal(const Network& net)
{
    Checker c(net, true);
    c.run();
    return c.out.empty();
}

bool has_source_relay(const Network& net)
{
    Layout lay(net);
    for (std::size_t g = 0; g < lay.node_in.size(); ++g) {
        LabelSet in = lay.node_in[g];
        if (popcount(in) != 1 || popcount(lay.node_out[g]) != 1) continue;
        Label s = lowest(in);
        if (!net.is_source(s)) continue;
        if (lay.node_heads(s) == (std::uint64_t{1} << g) && lay.sink_heads(s) == 0) return true;
    }
    return false;
}

Minimalized minimalize(const Network& net)
{
    ValidationReport rep = validate_structure(net);
    if (!rep.ok()) throw std::invalid_argument("minimalize: " + rep.violations.front());
    Minimalized res;
    res.trace.start = net;
    Network cur = net;
    while (true) {
        Checker c(cur, true);
        c.run();
        if (c.out.empty()) break;
        const Violation& v = c.out.front();
        if (v.condition == 14) {
            res.trace.components = split_components(cur);
            ReductionStep s = make_step(14, cur, cur, v.witness, identity_map(cur.n()));
            res.trace.steps.push_back(std::move(s));
            break;
        }
        ReductionStep step;
        cur = reduce(cur, v, step);
        res.trace.steps.push_back(std::move(step));
    }
    res.trace.end = cur;
    res.network = cur;
    return res;
}

std::string trace_json_lines(const ReductionTrace& trace)
{
    std::ostringstream os;
    for (const ReductionStep& s : trace.steps) {
        nlohmann::json j;
        j["kind"] = "D" + std::to_string(s.kind);
        j["witness"] = s.witness;
        j["before"] = {s.k_before, s.l_before};
        j["after"] = {s.k_after, s.l_after};
        j["label_map"] = std::vector<Label>(s.label_map.begin() + 1, s.label_map.end());
        j["zeroed"] = s.zeroed;
        j["freed"] = s.freed;
        j["summed"] = s.summed;
        j["minned"] = s.minned;
        os << j.dump() << '\n';
    }
    return os.str();
}

std::vector<std::string> rate_names(int k, int l)
{
    std::vector<std::string> n;
    for (int i = 1; i <= k; ++i) n.push_back("w" + std::to_string(i));
    for (int i = k + 1; i <= k + l; ++i) n.push_back("r" + std::to_string(i));
    return n;
}

namespace {

// Deletes the listed columns (0-based) from every constraint.
Cone drop_columns(const Cone& c, const std::vector<int>& cols)
{
    std::vector<bool> gone(c.dim(), false);
    for (int i : cols) gone[i] = true;
    std::vector<std::string> names;
    for (int i = 0; i < c.dim(); ++i)
        if (!gone[i]) names.push_back(c.names[i]);
    Cone out(names);
    auto cut = [&](const Vec& v) {
        Vec r;
        for (int i = 0; i < c.dim(); ++i)
            if (!gone[i]) r.push_back(v[i]);
        return r;
    };
    for (const Vec& v : c.ineqs) out.ineqs.push_back(cut(v));
    for (const Vec& v : c.eqs) out.eqs.push_back(cut(v));
    return out;
}

Cone push_cone(const ReductionStep& st, const Cone& c)
{
    int n = st.k_before + st.l_before;
    if (c.dim() != n) throw std::invalid_argument("push_region: coordinate mismatch");
    Cone cur = c;
    // Substitutions first, on full pre-step columns.
    for (auto [keep, gone] : st.minned) {
        for (Vec& v : cur.ineqs) v[keep - 1] += v[gone - 1];
        for (Vec& v : cur.eqs) v[keep - 1] += v[gone - 1];
    }
    std::vector<int> drop;
    for (Label z : st.zeroed) drop.push_back(z - 1);
    for (auto [keep, gone] : st.summed) drop.push_back(gone - 1);
    for (auto [keep, gone] : st.minned) drop.push_back(gone - 1);
    // Freed coordinates are projected out.
    if (!st.freed.empty()) {
        std::vector<int> keep_idx;
        for (int i = 0; i < n; ++i)
            if (std::find(st.freed.begin(), st.freed.end(), i + 1) == st.freed.end()) keep_idx.push_back(i);
        // Zero/sum/min columns are dropped before projecting.
        Cone fixed = drop_columns(cur, drop);
        std::vector<int> remaining;
        int pos = 0;
        for (int i = 0; i < n; ++i) {
            if (std::find(drop.begin(), drop.end(), i) != drop.end()) continue;
            if (std::find(st.freed.begin(), st.freed.end(), i + 1) == st.freed.end()) remaining.push_back(pos);
            ++pos;
        }
        cur = project(fixed, remaining);
    } else {
        cur = drop_columns(cur, drop);
    }
    // Columns now follow surviving pre labels in ascending order; label_map
    // is order preserving, so only the names change.
    Cone out(rate_names(st.k_after, st.l_after));
    if (cur.dim() != out.dim()) throw std::logic_error("push_region: dimension bookkeeping failed");
    out.ineqs = std::move(cur.ineqs);
    out.eqs = std::move(cur.eqs);
    return out;
}

enum class MinBranch { kept, removed };

Vec lift_vec(const ReductionStep& st, const Vec& a, MinBranch br)
{
    int n = st.k_before + st.l_before;
    Vec out(n, 0);
    for (Label x = 1; x <= n; ++x)
        if (st.label_map[x]) out[x - 1] = a[st.label_map[x] - 1];
    for (auto [keep, gone] : st.summed) out[gone - 1] = out[keep - 1];
    if (br == MinBranch::removed)
        for (auto [keep, gone] : st.minned) {
            out[gone - 1] = out[keep - 1];
            out[keep - 1] = 0;
        }
    return out;
}

Cone lift_cone(const ReductionStep& st, const Cone& c, MinBranch br, bool is_body)
{
    int n = st.k_before + st.l_before;
    Cone out(rate_names(st.k_before, st.l_before));
    for (const Vec& v : c.ineqs) out.ineqs.push_back(lift_vec(st, v, br));
    for (const Vec& v : c.eqs) out.eqs.push_back(lift_vec(st, v, br));
    auto unit = [&](Label x) {
        Vec e(n, 0);
        e[x - 1] = 1;
        return e;
    };
    if (is_body) {
        for (Label z : st.zeroed) out.eqs.push_back(unit(z));
        for (Label f : st.freed) out.ineqs.push_back(unit(f));
        for (auto [keep, gone] : st.summed) {
            out.ineqs.push_back(unit(keep));
            out.ineqs.push_back(unit(gone));
        }
    }
    // Branch cell: the chosen coordinate is the minimum.
    for (auto [keep, gone] : st.minned) {
        Vec d(n, 0);
        if (br == MinBranch::kept) {
            d[gone - 1] = 1;
            d[keep - 1] = -1;
        } else {
            d[keep - 1] = 1;
            d[gone - 1] = -1;
        }
        out.ineqs.push_back(d);
    }
    return out;
}

}  // namespace

Region push_step(const ReductionStep& st, const Region& r)
{
    if (st.kind == 14) return r;
    Region in = r;
    if (!st.freed.empty() && in.pieces.size() > 1) {
        in = simplify(in);
        if (in.pieces.size() > 1)
            throw std::domain_error("push_region: projecting a non-convex region is not supported");
    }
    Region out;
    out.names = rate_names(st.k_after, st.l_after);
    for (const auto& p : in.pieces) out.pieces.push_back({push_cone(st, p.cell), push_cone(st, p.body)});
    return out;
}

Region lift_step(const ReductionStep& st, const Region& r)
{
    if (st.kind == 14) return r;
    if (r.dim() != st.k_after + st.l_after) throw std::invalid_argument("lift_region: coordinate mismatch");
    Region out;
    out.names = rate_names(st.k_before, st.l_before);
    for (const auto& p : r.pieces) {
        out.pieces.push_back({lift_cone(st, p.cell, MinBranch::kept, false), lift_cone(st, p.body, MinBranch::kept, true)});
        if (!st.minned.empty())
            out.pieces.push_back(
                {lift_cone(st, p.cell, MinBranch::removed, false), lift_cone(st, p.body, MinBranch::removed, true)});
    }
    return out;
}

Region push_region(const ReductionTrace& trace, const Region& region_of_start)
{
    if (region_of_start.dim() != trace.start.n()) throw std::invalid_argument("push_region: coordinate mismatch");
    Region r = region_of_start;
    for (const ReductionStep& s : trace.steps) r = push_step(s, r);
    return r;
}

Region lift_region(const ReductionTrace& trace, const Region& region_of_end)
{
    if (region_of_end.dim() != trace.end.n()) throw std::invalid_argument("lift_region: coordinate mismatch");
    Region r = region_of_end;
    for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) r = lift_step(*it, r);
    return r;
}

Region assemble_components(const ReductionTrace& trace, const std::vector<Region>& parts)
{
    if (trace.components.empty()) {
        if (parts.size() != 1) throw std::invalid_argument("assemble_components: expected one region");
        return parts.front();
    }
    if (parts.size() != trace.components.size()) throw std::invalid_argument("assemble_components: count mismatch");
    Region prod;
    std::vector<Label> order;  // product coordinate -> end label
    for (std::size_t c = 0; c < parts.size(); ++c) {
        const Component& comp = trace.components[c];
        if (parts[c].dim() != comp.net.n()) throw std::invalid_argument("assemble_components: coordinate mismatch");
        std::vector<Label> inv(comp.net.n() + 1, 0);
        for (Label x = 1; x < static_cast<Label>(comp.label_map.size()); ++x)
            if (comp.label_map[x]) inv[comp.label_map[x]] = x;
        for (Label y = 1; y <= comp.net.n(); ++y) order.push_back(inv[y]);
        prod = c == 0 ? parts[c] : region_product(prod, parts[c]);
    }
    int n = trace.end.n();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[order[i] - 1] = i;
    Region out;
    out.names = rate_names(trace.end.k, trace.end.l);
    for (const auto& p : prod.pieces)
        out.pieces.push_back({permute(p.cell, perm, out.names), permute(p.body, perm, out.names)});
    return out;
}

}  // namespace hnc
