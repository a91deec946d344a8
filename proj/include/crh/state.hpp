#pragma once

#include <vector>

#include "crh/geometry.hpp"

namespace crh {

// Snapshot seen by the controller. Targets and agents are referred to by
// their index in the MissionSpec lists; live_targets is kept ascending.
struct MissionState {
    double clock = 0.0;
    std::vector<Vec2> agent_positions;
    std::vector<int> live_targets;
};

}  // namespace crh
