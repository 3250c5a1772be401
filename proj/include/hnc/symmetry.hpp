// SPDX-License-Identifier: MIT
// symmetry.hpp: relabelings of sources and edges acting on networks.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hnc/model.hpp"

namespace hnc {

// A block permutation: sources map to sources and edges to edges.
// image[x] is the new label of x; image[0] is unused.
struct Permutation {
    int k = 0;
    int l = 0;
    std::vector<Label> image;

    static Permutation identity(int k, int l);
    static Permutation from_blocks(const std::vector<Label>& source_map, const std::vector<Label>& edge_map);

    Label operator()(Label x) const { return image[x]; }
    LabelSet operator()(LabelSet s) const;
    bool is_identity() const;
    Permutation inverse() const;
    // (a * b)(x) = a(b(x))
    friend Permutation operator*(const Permutation& a, const Permutation& b);
    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend bool operator<(const Permutation& a, const Permutation& b) { return a.image < b.image; }

    // Two one-line images, e.g. "s:[2,1] e:[3,4]".
    std::string str() const;
    static Permutation parse(const std::string& text);
};

class PermGroup {
public:
    PermGroup(int k, int l, std::vector<Permutation> generators);

    // S_K x S_L.
    static PermGroup full(int k, int l);

    int k() const { return k_; }
    int l() const { return l_; }
    const std::vector<Permutation>& generators() const { return gens_; }

    // Every element, identity first, in a deterministic order.
    const std::vector<Permutation>& elements() const;
    std::uint64_t order() const { return elements().size(); }
    bool contains(const Permutation& p) const;

private:
    int k_;
    int l_;
    std::vector<Permutation> gens_;
    mutable std::vector<Permutation> elems_;
};

std::uint64_t factorial(int n);

// Largest K!*L! handled by the exhaustive routines below.
constexpr std::uint64_t kMaxGroupOrder = 1000000;

Network apply(const Permutation& perm, const Network& net);

struct Canonical {
    Network canonical;
    Permutation witness;  // apply(witness, net) == canonical
};

// Minimum of the orbit under compare(). Throws std::length_error when
// K!*L! exceeds kMaxGroupOrder.
Canonical canonicalize(const Network& net);

PermGroup stabilizer(const Network& net);
std::uint64_t orbit_size(const Network& net);

// Orderly generation of orbit representatives of subsets of {0..n-1}.
// `group` lists every group element as an index permutation. A subset is
// kept when it is the lexicographically least sorted index vector in its
// orbit; `inherit_test` must be hereditary and group invariant.
struct TransversalEntry {
    std::vector<int> subset;
    std::vector<int> stabilizer;  // indices into `group`
};

using SubsetVisitor = std::function<void(const std::vector<int>& subset, const std::vector<int>& stabilizer)>;
using SubsetTest = std::function<bool(const std::vector<int>& subset)>;

// Visits every canonical subset of size <= max_size that passes the test,
// including the empty set.
void orderly_subsets(int n, const std::vector<std::vector<int>>& group, int max_size,
                     const SubsetTest& inherit_test, const SubsetVisitor& visit);

std::vector<TransversalEntry> subset_transversal(int n, const std::vector<std::vector<int>>& group,
                                                 int target_size, const SubsetTest& inherit_test);

}  // namespace hnc
