// SPDX-License-Identifier: MIT
// minimality.hpp: the fourteen minimality conditions, the reductions that
// restore them, and the rate-region maps carried by each reduction.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hnc/model.hpp"
#include "hnc/polyhedra.hpp"

namespace hnc {

struct Violation {
    int condition = 0;          // 1..14
    std::string witness;        // human readable
    std::vector<Label> labels;  // offending sources or edges
};

std::string condition_name(int c);  // "C7"

// Every violated condition, in checking order C1, C2, C6, C5, C3, C4,
// C7..C14. C5 and C11 hold by construction of the encoding and never appear.
// C9 is tested only for relays whose input is a non-source edge.
std::vector<Violation> check_conditions(const Network& net);
bool is_minimal(const Network& net);

// A node fed only by a source that reaches nothing else and emitting a
// single edge. The enumeration catalog excludes these when L >= 2.
bool has_source_relay(const Network& net);

struct ReductionStep {
    int kind = 0;  // D-number 1..14
    std::string witness;
    int k_before = 0, l_before = 0;
    int k_after = 0, l_after = 0;
    // Pre-step label -> post-step label, 0 when removed. Index 0 unused.
    std::vector<Label> label_map;
    // Coordinates touched, as pre-step labels.
    std::vector<Label> zeroed;                    // rate fixed to zero
    std::vector<Label> freed;                     // unconstrained (>= 0)
    std::vector<std::pair<Label, Label>> summed;  // (kept, removed): kept' = kept + removed
    std::vector<std::pair<Label, Label>> minned;  // (kept, removed): kept' = min(kept, removed)
};

struct Component {
    Network net;
    // Label of the split network -> label in this component, 0 when absent.
    std::vector<Label> label_map;
};

struct ReductionTrace {
    Network start;
    Network end;  // satisfies C1..C13; connected unless components is non-empty
    std::vector<ReductionStep> steps;
    // Set when end is disconnected: its weakly connected parts, each minimal.
    std::vector<Component> components;

    bool is_empty_result() const { return end.empty(); }
    bool is_minimal_end() const { return components.empty(); }
};

struct Minimalized {
    Network network;
    ReductionTrace trace;
};

// Applies reductions until no condition is violated, restarting at C1 after
// each one. A disconnected result stops at the D14 split.
Minimalized minimalize(const Network& net);

// One JSON object per step, newline separated.
std::string trace_json_lines(const ReductionTrace& trace);

// Rate coordinate names of a (K,L) network: w1..wK, rK+1..rK+L.
std::vector<std::string> rate_names(int k, int l);

// Region of start -> region of end, and back.
Region push_region(const ReductionTrace& trace, const Region& region_of_start);
Region lift_region(const ReductionTrace& trace, const Region& region_of_end);
Region push_step(const ReductionStep& step, const Region& r);
Region lift_step(const ReductionStep& step, const Region& r);

// The region of a disconnected network from its components' regions.
Region assemble_components(const ReductionTrace& trace, const std::vector<Region>& component_regions);

}  // namespace hnc
