#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "crh/controller.hpp"
#include "crh/mission.hpp"

namespace crh {

struct OracleResult {
    double reward = 0.0;
    std::vector<int> order;  // target indices
};

// Reward of visiting targets in `order` from the first agent's start,
// chaining capture points; visits after the mission time earn nothing.
double order_reward(const MissionSpec& spec, std::span<const int> order);

// Best visit order over all permutations (single agent, all targets known at
// t = 0). Ties keep the lexicographically smallest order.
OracleResult exhaustive_optimal(const MissionSpec& spec, std::size_t cap = 10);
OracleResult exhaustive_optimal_serial(const MissionSpec& spec, std::size_t cap = 10);

enum class TwoTargetLabel { first_second, second_first, tie };

struct TwoTargetResult {
    TwoTargetLabel label = TwoTargetLabel::tie;
    double margin = 0.0;  // R(1,2) - R(2,1)
};

TwoTargetResult two_target_optimal(const MissionSpec& spec, double tie_margin = 1e-9);

struct GridCheck {
    double best_value = 0.0;
    std::vector<double> best_headings;
};

// Best J_I + J_A over n evenly spaced headings per agent (product grid).
GridCheck discretized_control_check(const Problem& problem, const MissionState& state, int n);
GridCheck discretized_control_check_serial(const Problem& problem, const MissionState& state,
                                           int n);

// Targets minimizing travel cost at some of n evenly spaced points of the
// agent's reachable circle. Computed without the controller's cost code.
std::vector<int> active_set_bruteforce(const MissionSpec& spec, const MissionState& state,
                                       int agent, double horizon, int n,
                                       std::span<const int> contenders = {});

}  // namespace crh
