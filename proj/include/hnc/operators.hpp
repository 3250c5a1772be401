// SPDX-License-Identifier: MIT
// operators.hpp: embedding operators (minors) and combination operators
// (merges), with the maps they induce on rate regions, plus minor search,
// forbidden-minor classification and partial closure of a seed list.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hnc/minimality.hpp"
#include "hnc/model.hpp"
#include "hnc/polyhedra.hpp"

namespace hnc {

// ---------------------------------------------------------------------------
// Embedding

enum class EmbedKind { SourceDelete, EdgeContract, EdgeDelete };
std::string embed_kind_name(EmbedKind k);  // "source-delete", ...

struct EmbedStep {
    EmbedKind kind = EmbedKind::SourceDelete;
    Label target = 0;
    Network pre;
    Network raw;                // after the operation, before reductions
    std::vector<Label> raw_map;  // pre label -> raw label, 0 when removed
    ReductionTrace trace;        // raw -> post
    Network post;                // trace.end

    std::string describe() const;
};

// Each throws std::invalid_argument when the target has the wrong type.
EmbedStep delete_source(const Network& net, Label s);
EmbedStep contract_edge(const Network& net, Label e);
EmbedStep delete_edge(const Network& net, Label e);
// Every applicable single operation: source deletions, then contractions,
// then deletions, each in label order.
std::vector<EmbedStep> single_embeddings(const Network& net);

struct EmbedTransfer {
    Region region;
    // Contraction of a scalar-code region only yields an outer estimate of
    // the minor's scalar region.
    bool one_sided = false;
};

// Region of step.post from the region of step.pre. tag names the bound the
// region came from ("outer", "scalar-2", ...).
EmbedTransfer embed_region(const EmbedStep& step, const Region& big, const std::string& tag = "outer");

enum class MinorStatus { Yes, No, Unknown };

struct MinorResult {
    MinorStatus status = MinorStatus::No;
    std::vector<EmbedStep> witness;  // replays from canonical(big) to canonical(small)
    std::uint64_t expanded = 0;
};

// Breadth-first search over canonical forms; budget counts expanded nodes.
MinorResult is_minor(const Network& small, const Network& big, std::uint64_t budget = 100000);

enum class MinorClass { HasSmallerMinor, NewForbiddenMinor, Unknown };
std::string minor_class_name(MinorClass c);

struct ForbiddenMinorEntry {
    Network net;
    MinorClass cls = MinorClass::Unknown;
    std::optional<Network> minor;  // the smaller listed network found inside net
    std::vector<EmbedStep> witness;
};

// Classifies each listed network by whether another listed network is a
// proper minor of it.
std::vector<ForbiddenMinorEntry> forbidden_minor_filter(const std::vector<Network>& insufficient,
                                                        std::uint64_t budget = 100000);

// ---------------------------------------------------------------------------
// Combination

enum class CombineKind { SourceMerge, SinkMerge, NodeMerge, EdgeMerge };
std::string combine_kind_name(CombineKind k);  // "source-merge", ...

struct CombineStep {
    CombineKind kind = CombineKind::SourceMerge;
    Network left, right;
    // Paired elements: source labels for source merges, sink indices (in
    // node_view order) for sink merges, node indices for node merges, edge
    // labels for edge merges.
    std::vector<std::pair<int, int>> pairing;
    Network raw;     // right re-based after left, merged, not yet relabeled
    Network result;  // canonical form of raw when the group is small enough
    bool canonical = false;
    // Operand label -> result label; the merged edges of an edge merge map to 0.
    std::vector<Label> left_map, right_map;
    // Edge merge only: result labels of the edges Tl(e)->g0, Tl(e')->g0,
    // g0->Hd(e), g0->Hd(e').
    std::array<Label, 4> new_edges{};

    std::string describe() const;
};

CombineStep merge_sources(const Network& a, const Network& b, const std::vector<std::pair<Label, Label>>& pairs);
CombineStep merge_sinks(const Network& a, const Network& b, const std::vector<std::pair<int, int>>& pairs);
CombineStep merge_nodes(const Network& a, int g, const Network& b, int g2);
CombineStep merge_edges(const Network& a, Label e, const Network& b, Label e2);

// Size of the merged network assuming no redundancy, as (K, L).
std::pair<int, int> predicted_size(CombineKind kind, const Network& a, const Network& b, int pairs);

// Region of step.result from the operands' regions.
Region combine_region(const CombineStep& step, const Region& left, const Region& right);

// Every merge of a with b (all pairings of every size, source pairings capped
// at max_source_pairs when it is positive), in a fixed order, restricted to
// those whose predicted size fits within (k_max, l_max).
void for_each_merge(const Network& a, const Network& b, int k_max, int l_max,
                    const std::function<void(const CombineStep&)>& fn, int max_source_pairs = 0);

// ---------------------------------------------------------------------------
// Closure

struct ClosureConfig {
    std::vector<Network> seeds;
    int k_max = 2;
    int l_max = 2;
    bool allow_embedding = false;
    // Source merges identify one pair of sources unless this is set.
    bool multi_pair_source_merge = false;
    std::uint64_t budget = 10000000;  // merge and embedding attempts
};

struct ClosureRecord {
    Network net;  // canonical and minimal
    int generation = 0;
    std::string op;  // "seed", "source-merge", ..., "edge-delete"
    std::vector<std::string> operands;  // rendered operand networks
    std::string pairing;
};

struct ClosureResult {
    std::vector<ClosureRecord> networks;  // seeds first, then by generation and key
    std::vector<std::size_t> new_per_generation;
    bool converged = true;
    std::uint64_t attempts = 0;

    std::size_t count(int k, int l) const;
};

ClosureResult closure(const ClosureConfig& config,
                      const std::function<void(const std::string&)>& progress = {});

// JSON-lines provenance: {result_key, op_kind, operand_keys, pairing, generation}.
std::string closure_provenance(const ClosureResult& r);

}  // namespace hnc
