#pragma once

#include <span>
#include <vector>

#include "crh/mission.hpp"
#include "crh/state.hpp"

namespace crh {

// Indices of the min(b, N) agents closest to `target`, nearest first, ties by index.
std::vector<int> neighbor_set(Vec2 target, std::span<const Vec2> agents, int b);

// delta for `agent` given the neighbor set of this target.
double relative_distance(Vec2 target, std::span<const Vec2> agents, int agent,
                         std::span<const int> neighbors);

double proximity(double delta, double cooperation_delta);

struct ProximityTable {
    int agent_count = 0;
    std::vector<int> targets;  // row order
    std::vector<double> direct_distances;   // row-major, target x agent
    std::vector<double> relative_distances;
    std::vector<double> proximities;

    double direct(int row, int agent) const { return direct_distances[row * agent_count + agent]; }
    double relative(int row, int agent) const {
        return relative_distances[row * agent_count + agent];
    }
    double prox(int row, int agent) const { return proximities[row * agent_count + agent]; }
};

ProximityTable proximity_table(const MissionSpec& spec, const MissionState& state);

struct TargetPartition {
    std::vector<int> owner;  // per target index; -1 when the target is not live
    std::vector<int> sizes;  // per agent

    std::vector<int> owned_by(int agent) const;
};

TargetPartition partition_targets(const MissionSpec& spec, const MissionState& state);

}  // namespace crh
