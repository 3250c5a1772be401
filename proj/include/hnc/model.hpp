// SPDX-License-Identifier: MIT
// model.hpp: (Q,W) encoding of hyperedge multi-source network coding problems.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hnc {

// Labels 1..K are sources, K+1..K+L are non-source edges. A label set is a
// bitmask with bit i standing for label i (bit 0 is never used).
using Label = int;
using LabelSet = std::uint64_t;

constexpr int kMaxLabel = 63;

inline LabelSet bit(Label x) { return LabelSet{1} << x; }
inline bool has(LabelSet s, Label x) { return (s >> x) & 1U; }
inline int popcount(LabelSet s) { return __builtin_popcountll(s); }
inline Label lowest(LabelSet s) { return __builtin_ctzll(s); }
inline Label highest(LabelSet s) { return 63 - __builtin_clzll(s); }

std::vector<Label> members(LabelSet s);
LabelSet make_set(const std::vector<Label>& xs);
// Mask of labels lo..hi inclusive (empty when hi < lo).
LabelSet label_range(Label lo, Label hi);

// Sets are ordered as sorted label sequences, lexicographically, with a
// proper prefix counting as smaller. Returns -1, 0 or 1.
int compare_sets(LabelSet a, LabelSet b);

// An edge definition (edge, inputs) or a sink definition (demand, inputs).
struct Def {
    Label id = 0;
    LabelSet in = 0;

    friend bool operator==(const Def&, const Def&) = default;
};

int compare_defs(const Def& a, const Def& b);
inline bool def_less(const Def& a, const Def& b) { return compare_defs(a, b) < 0; }

struct Network {
    int k = 0;
    int l = 0;
    std::vector<Def> q;  // edge definitions, sorted, no duplicates
    std::vector<Def> w;  // sink definitions, sorted, no duplicates

    Network() = default;
    Network(int k_, int l_, std::vector<Def> q_, std::vector<Def> w_);

    int n() const { return k + l; }
    LabelSet sources() const { return label_range(1, k); }
    LabelSet edges() const { return label_range(k + 1, k + l); }
    bool is_source(Label x) const { return x >= 1 && x <= k; }
    bool is_edge(Label x) const { return x > k && x <= k + l; }
    bool empty() const { return k == 0 && l == 0; }

    // Input set of edge e, or nullptr when e has no definition.
    const Def* edge_def(Label e) const;

    // Sorts both lists and drops duplicates. Every constructor path calls it.
    void normalize();

    friend bool operator==(const Network&, const Network&) = default;
};

// The network with no sources and no edges, returned when a reduction
// removes everything.
Network empty_network();

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Network& net);

// Like validate() but tolerates empty edge inputs, which reductions produce
// transiently before C6 removes them.
ValidationReport validate_structure(const Network& net);

// Derived node/sink view. Nodes and sinks are keyed by their distinct input
// sets and listed in set order.
struct NodeView {
    int k = 0;
    int l = 0;
    std::vector<LabelSet> node_in;
    std::vector<LabelSet> node_out;     // edges leaving each node
    std::vector<LabelSet> sink_in;
    std::vector<LabelSet> sink_demand;  // beta(t)
    std::vector<int> tail;              // tail[e] = node index, -1 for sources
    std::vector<std::vector<int>> head_nodes;  // per label
    std::vector<std::vector<int>> head_sinks;  // per label
};

NodeView node_view(const Network& net);

// Total order on networks of equal size: Q as a sorted list first, then W.
int compare(const Network& a, const Network& b);
inline bool network_less(const Network& a, const Network& b) { return compare(a, b) < 0; }

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what), position(pos) {}
    std::size_t position;
};

Network parse(const std::string& text);
std::string render(const Network& net);

// Edge dependency order; throws std::invalid_argument on a cycle.
std::vector<Label> topological_edges(const Network& net);

// Human readable one-liner used in logs and error messages.
std::string describe(const Network& net);

}  // namespace hnc
