#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "crh/controller.hpp"

namespace crh {

struct ControlDecision {
    double planning_horizon = 0.0;
    std::vector<std::vector<HeadingCandidate>> joint_candidates;
    std::vector<std::size_t> chosen_index;  // per agent, into joint_candidates[j]
    std::vector<double> chosen_headings;
    double action_horizon = 0.0;
    double objective_value = 0.0;
    int depth = 1;
    bool depth_truncated = false;
};

// Tree search over joint candidate headings to depth min(K, live targets).
// Root branches are evaluated in parallel; solve_serial is the reference.
ControlDecision solve(const Problem& problem, const MissionState& state);
ControlDecision solve_serial(const Problem& problem, const MissionState& state);

// Value of every root joint candidate in lexicographic order.
std::vector<double> root_values(const Problem& problem, const MissionState& state, int depth);

struct LeafRecord {
    std::vector<std::vector<std::size_t>> branches;  // joint index per level
    double value = 0.0;
};

std::vector<LeafRecord> enumerate_leaves(const Problem& problem, const MissionState& state,
                                         int depth);

// Root-to-leaf paths of the single-agent visit tree: each edge commits to an
// active target and moves to its capture point.
std::uint64_t count_paths(const Problem& problem, const MissionState& state);

}  // namespace crh
