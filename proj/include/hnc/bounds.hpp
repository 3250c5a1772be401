// SPDX-License-Identifier: MIT
// bounds.hpp: Shannon outer bounds and binary-matroid inner bounds on rate
// regions, in exact arithmetic.
//
// Entropy coordinates of N variables are indexed by subset bitmask minus one
// (bit i stands for variable i+1). Network variable i is the source or edge
// with label i.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hnc/model.hpp"
#include "hnc/polyhedra.hpp"

namespace hnc {

constexpr int kMaxEntropyVars = 6;
constexpr int kMaxMatroidGround = 8;

std::vector<std::string> entropy_names(int n);

// Elemental inequalities: h(N) - h(N-i) >= 0 and
// h(iK) + h(jK) - h(ijK) - h(K) >= 0.
Cone shannon_cone(int n);
// Every monotonicity and submodularity inequality (for cross-checks).
Cone shannon_cone_full(int n);
// The six Ingleton instances on four variables, as a >= 0 rows.
std::vector<Vec> ingleton_inequalities();

// Sparse linear form over entropy coordinates: (subset mask, coefficient).
using EntropyForm = std::vector<std::pair<std::uint32_t, int>>;

struct NetworkConstraints {
    int n = 0;                     // number of variables
    std::vector<EntropyForm> l1;   // source independence, = 0
    std::vector<EntropyForm> l3;   // node encoding, = 0 (one per node)
    std::vector<EntropyForm> l5;   // sink decoding, = 0 (one per sink)
    // Edge capacity R_e - h(e) >= 0: rate label e with entropy coordinate {e}.
    std::vector<Label> l4_edges;

    std::vector<EntropyForm> equalities() const;  // l1, l3, l5
};

// Throws std::invalid_argument unless net is minimal.
NetworkConstraints constraint_set(const Network& net);
// Same constraints without the minimality requirement.
NetworkConstraints network_constraints(const Network& net);

Vec dense(const EntropyForm& f, int n);

// Rate region bounds over (w1..wK, rK+1..rK+L). Any structurally valid
// network is accepted. Throws std::length_error beyond kMaxEntropyVars.
Region outer_region(const Network& net);
Region scalar_inner_region(const Network& net, int q = 2);
Region vector_inner_region(const Network& net, int q, int ground_size);
// Only for K+L = 4.
Region ingleton_region(const Network& net);

// Outer bound of an arbitrary entropy cone: Proj(c cap L_A), c over
// entropy_names(K+L).
Region region_from_entropy_cone(const Network& net, const Cone& c);

// Rank vectors of binary matroids on m labeled elements, one byte per
// nonempty subset.
using RankVector = std::vector<std::uint8_t>;

// Streams every binary matroid on m elements exactly once.
void for_each_binary_matroid(int m, const std::function<void(const RankVector&)>& fn);
// Collected and deduplicated; throws std::length_error for q != 2 or m > 8.
std::vector<RankVector> matroid_ranks(int m, int q = 2);
bool satisfies_matroid_axioms(const RankVector& r, int m);

// Bound tags: "outer", "scalar-2", "vector-2-<N'>", "ingleton".
bool valid_bound_tag(const std::string& tag);
Region compute_bound(const Network& net, const std::string& tag);

struct RegionBundle {
    std::string key;  // rendered network
    Region outer;
    std::map<std::string, Region> inner;
    std::map<std::string, bool> matches_outer;
};

RegionBundle sufficiency_report(const Network& net, const std::vector<std::string>& tags);

}  // namespace hnc
