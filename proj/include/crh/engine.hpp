#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "crh/lookahead.hpp"
#include "crh/mission.hpp"
#include "crh/state.hpp"

namespace crh {

enum class EventKind {
    control_evaluated,
    target_visited,
    target_appeared,
    target_expired,
    multiple_immediate_target,
    mission_complete,
};

std::string_view to_string(EventKind kind);

// agent and target hold ids from the spec (-1 when not applicable).
struct MissionEvent {
    double time = 0.0;
    EventKind kind = EventKind::control_evaluated;
    int agent = -1;
    int target = -1;
    double reward = 0.0;
    double planning_horizon = 0.0;
    double action_horizon = 0.0;

    friend bool operator==(const MissionEvent&, const MissionEvent&) = default;
};

struct TrajectorySample {
    double time = 0.0;
    Vec2 position;
    double heading = 0.0;

    friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

struct MissionLog {
    std::vector<MissionEvent> events;
    std::vector<std::vector<TrajectorySample>> trajectories;  // per agent
    double total_reward = 0.0;
    double completion_time = 0.0;
    std::size_t control_steps = 0;
    bool depth_truncated = false;

    friend bool operator==(const MissionLog&, const MissionLog&) = default;
};

struct Visit {
    int target = -1;
    int agent = -1;
    double time = 0.0;
    double reward = 0.0;
};

MissionLog run_mission(const MissionSpec& spec);

// Live targets visible to `agent` from its current position.
std::vector<int> sense_filter(const MissionSpec& spec, const MissionState& state, int agent);

double total_reward(const MissionLog& log);
std::vector<Visit> visits(const MissionLog& log);

}  // namespace crh
