// SPDX-License-Identifier: MIT
#include "hnc/model.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace hnc {

std::vector<Label> members(LabelSet s)
{
    std::vector<Label> out;
    while (s) {
        out.push_back(lowest(s));
        s &= s - 1;
    }
    return out;
}

LabelSet make_set(const std::vector<Label>& xs)
{
    LabelSet s = 0;
    for (Label x : xs) s |= bit(x);
    return s;
}

LabelSet label_range(Label lo, Label hi)
{
    if (hi < lo) return 0;
    LabelSet upto = (hi >= 63) ? ~LabelSet{0} : (bit(hi + 1) - 1);
    return upto & ~(bit(lo) - 1);
}

int compare_sets(LabelSet a, LabelSet b)
{
    if (a == b) return 0;
    LabelSet d = a ^ b;
    Label x = lowest(d);
    // Below x both sequences agree. The one holding x is smaller unless the
    // other one has run out of elements, in which case it is a prefix.
    LabelSet above = ~((bit(x) << 1) - 1);
    if (has(a, x)) return (b & above) ? -1 : 1;
    return (a & above) ? 1 : -1;
}

int compare_defs(const Def& a, const Def& b)
{
    if (a.id != b.id) return a.id < b.id ? -1 : 1;
    return compare_sets(a.in, b.in);
}

namespace {

void sort_unique(std::vector<Def>& v)
{
    std::sort(v.begin(), v.end(), def_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

int compare_lists(const std::vector<Def>& a, const std::vector<Def>& b)
{
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare_defs(a[i], b[i]);
        if (c) return c;
    }
    if (a.size() == b.size()) return 0;
    return a.size() < b.size() ? -1 : 1;
}

std::string set_text(LabelSet s)
{
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (Label x : members(s)) {
        if (!first) os << ',';
        os << x;
        first = false;
    }
    os << '}';
    return os.str();
}

}  // namespace

Network::Network(int k_, int l_, std::vector<Def> q_, std::vector<Def> w_)
    : k(k_), l(l_), q(std::move(q_)), w(std::move(w_))
{
    normalize();
}

void Network::normalize()
{
    sort_unique(q);
    sort_unique(w);
}

const Def* Network::edge_def(Label e) const
{
    for (const Def& d : q)
        if (d.id == e) return &d;
    return nullptr;
}

Network empty_network() { return Network{}; }

ValidationReport validate_structure(const Network& net)
{
    ValidationReport rep;
    auto& v = rep.violations;
    if (net.k < 0 || net.l < 0 || net.n() > kMaxLabel) {
        v.push_back("size out of range");
        return rep;
    }
    LabelSet all = label_range(1, net.n());
    if (static_cast<int>(net.q.size()) != net.l)
        v.push_back("edge definition count " + std::to_string(net.q.size()) +
                    " differs from L=" + std::to_string(net.l));
    LabelSet seen = 0;
    for (const Def& d : net.q) {
        if (!net.is_edge(d.id)) {
            v.push_back("edge label " + std::to_string(d.id) + " out of range");
            continue;
        }
        if (has(seen, d.id)) v.push_back("edge " + std::to_string(d.id) + " defined twice");
        seen |= bit(d.id);
        if (d.in & ~all) v.push_back("edge " + std::to_string(d.id) + " has input label out of range");
        if (has(d.in, d.id)) v.push_back("edge " + std::to_string(d.id) + " feeds itself");
    }
    for (const Def& d : net.w) {
        if (!net.is_source(d.id)) v.push_back("sink demand " + std::to_string(d.id) + " is not a source");
        if (d.in & ~all) v.push_back("sink input label out of range");
    }
    if (v.empty()) {
        try {
            topological_edges(net);
        } catch (const std::invalid_argument&) {
            v.push_back("cycle in edge dependencies");
        }
    }
    return rep;
}

ValidationReport validate(const Network& net)
{
    ValidationReport rep = validate_structure(net);
    for (const Def& d : net.q)
        if (d.in == 0) rep.violations.push_back("edge " + std::to_string(d.id) + " has empty input");
    return rep;
}

std::vector<Label> topological_edges(const Network& net)
{
    // Kahn's algorithm over the edge dependency graph.
    std::vector<LabelSet> deps(net.n() + 1, 0);
    LabelSet edges = net.edges();
    for (const Def& d : net.q)
        if (net.is_edge(d.id)) deps[d.id] = d.in & edges & ~bit(d.id);
    std::vector<Label> order;
    LabelSet done = 0;
    LabelSet todo = 0;
    for (const Def& d : net.q) todo |= bit(d.id);
    if (has(todo, 0)) throw std::invalid_argument("edge label 0");
    while (todo) {
        bool progress = false;
        for (Label e : members(todo)) {
            if ((deps[e] & ~done) == 0) {
                order.push_back(e);
                done |= bit(e);
                todo &= ~bit(e);
                progress = true;
            }
        }
        if (!progress) throw std::invalid_argument("cycle in edge dependencies");
    }
    return order;
}

NodeView node_view(const Network& net)
{
    ValidationReport rep = validate_structure(net);
    if (!rep.ok()) throw std::invalid_argument("node_view: " + rep.violations.front());

    NodeView nv;
    nv.k = net.k;
    nv.l = net.l;
    for (const Def& d : net.q) nv.node_in.push_back(d.in);
    std::sort(nv.node_in.begin(), nv.node_in.end(),
              [](LabelSet a, LabelSet b) { return compare_sets(a, b) < 0; });
    nv.node_in.erase(std::unique(nv.node_in.begin(), nv.node_in.end()), nv.node_in.end());
    nv.node_out.assign(nv.node_in.size(), 0);

    int n = net.n();
    nv.tail.assign(n + 1, -1);
    for (const Def& d : net.q) {
        auto it = std::find(nv.node_in.begin(), nv.node_in.end(), d.in);
        int g = static_cast<int>(it - nv.node_in.begin());
        nv.node_out[g] |= bit(d.id);
        nv.tail[d.id] = g;
    }

    for (const Def& d : net.w) {
        auto it = std::find(nv.sink_in.begin(), nv.sink_in.end(), d.in);
        if (it == nv.sink_in.end()) {
            nv.sink_in.push_back(d.in);
            nv.sink_demand.push_back(bit(d.id));
        } else {
            nv.sink_demand[it - nv.sink_in.begin()] |= bit(d.id);
        }
    }
    // Sink list in set order, demands carried along.
    std::vector<std::size_t> idx(nv.sink_in.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return compare_sets(nv.sink_in[a], nv.sink_in[b]) < 0;
    });
    std::vector<LabelSet> sin, sdem;
    for (std::size_t i : idx) {
        sin.push_back(nv.sink_in[i]);
        sdem.push_back(nv.sink_demand[i]);
    }
    nv.sink_in = std::move(sin);
    nv.sink_demand = std::move(sdem);

    nv.head_nodes.assign(n + 1, {});
    nv.head_sinks.assign(n + 1, {});
    for (std::size_t g = 0; g < nv.node_in.size(); ++g)
        for (Label x : members(nv.node_in[g])) nv.head_nodes[x].push_back(static_cast<int>(g));
    for (std::size_t t = 0; t < nv.sink_in.size(); ++t)
        for (Label x : members(nv.sink_in[t])) nv.head_sinks[x].push_back(static_cast<int>(t));
    return nv;
}

int compare(const Network& a, const Network& b)
{
    if (a.k != b.k || a.l != b.l) throw std::invalid_argument("compare: networks of different size");
    int c = compare_lists(a.q, b.q);
    if (c) return c;
    return compare_lists(a.w, b.w);
}

namespace {

using nlohmann::json;

json defs_json(const std::vector<Def>& defs)
{
    json arr = json::array();
    for (const Def& d : defs) arr.push_back(json::array({d.id, members(d.in)}));
    return arr;
}

std::vector<Def> defs_from(const json& j, const char* field)
{
    if (!j.is_array()) throw ParseError(std::string("field \"") + field + "\" must be an array", 0);
    std::vector<Def> out;
    for (const json& item : j) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() || !item[1].is_array())
            throw ParseError(std::string("malformed entry in \"") + field + "\"", 0);
        Def d;
        d.id = item[0].get<int>();
        for (const json& x : item[1]) {
            if (!x.is_number_integer()) throw ParseError("label must be an integer", 0);
            int v = x.get<int>();
            if (v < 1 || v > kMaxLabel) throw ParseError("label out of range", 0);
            d.in |= bit(v);
        }
        out.push_back(d);
    }
    return out;
}

}  // namespace

Network parse(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    if (!j.is_object()) throw ParseError("network must be a JSON object", 0);
    for (const char* f : {"k", "l", "q", "w"})
        if (!j.contains(f)) throw ParseError(std::string("missing field \"") + f + "\"", 0);
    if (!j["k"].is_number_integer() || !j["l"].is_number_integer())
        throw ParseError("fields \"k\" and \"l\" must be integers", 0);
    Network net(j["k"].get<int>(), j["l"].get<int>(), defs_from(j["q"], "q"), defs_from(j["w"], "w"));
    return net;
}

std::string render(const Network& net)
{
    json j;
    j["k"] = net.k;
    j["l"] = net.l;
    j["q"] = defs_json(net.q);
    j["w"] = defs_json(net.w);
    return j.dump();
}

std::string describe(const Network& net)
{
    std::ostringstream os;
    os << '(' << net.k << ',' << net.l << ") Q=";
    for (const Def& d : net.q) os << '(' << d.id << ',' << set_text(d.in) << ')';
    os << " W=";
    for (const Def& d : net.w) os << '(' << d.id << ',' << set_text(d.in) << ')';
    return os.str();
}

}  // namespace hnc
