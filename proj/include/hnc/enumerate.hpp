// SPDX-License-Identifier: MIT
// enumerate.hpp: isomorph-free enumeration of minimal (K,L) networks.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hnc/model.hpp"
#include "hnc/symmetry.hpp"

namespace hnc {

struct EnumeratedNetwork {
    Network net;  // canonical form
    std::vector<Permutation> stabilizer_generators;
    std::uint64_t stabilizer_order = 1;
    std::uint64_t orbit_size = 1;
};

struct EnumerateOptions {
    // Every edge reads all sources and sinks read edges only.
    bool idsc = false;
    // Drop networks with a relay node fed by a lone source (see
    // has_source_relay); applied only when L >= 2.
    bool catalog_rule = true;
    // When set, progress is saved here and an existing file is resumed.
    std::string checkpoint_path;
    std::uint64_t checkpoint_every = 10000;  // candidates between saves
    std::function<void(const std::string&)> progress;
};

struct EnumerationResult {
    int k = 0;
    int l = 0;
    bool idsc = false;
    std::vector<EnumeratedNetwork> networks;  // sorted by compare()
    std::uint64_t labeled_count = 0;          // sum of orbit sizes
    std::uint64_t edge_sets = 0;              // orbit representatives of Q
    std::uint64_t candidates = 0;             // (Q,W) pairs tested
};

EnumerationResult enumerate_networks(int k, int l, const EnumerateOptions& opt = {});

// The canonical minimal networks with K+L <= 3: the (1,1), (1,2) and (2,1)
// catalogs in that order. These are the usual closure seeds.
std::vector<Network> smallest_canonicals();

// The group S_K x S_L acting on a list of definitions, as index permutations.
std::vector<std::vector<int>> induced_action(const std::vector<Def>& universe, const std::vector<Permutation>& group);

}  // namespace hnc
