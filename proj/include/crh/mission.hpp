#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crh/geometry.hpp"

namespace crh {

struct Target {
    int id = 0;
    Vec2 position;
    double initial_reward = 1.0;  // lambda
    double alpha = 1.0;
    double beta = 1.0;
    double deadline = 1.0;  // D-bar: time at which the linear part of the discount ends
    double capture_radius = 0.0;
    double appears_at = 0.0;

    friend bool operator==(const Target&, const Target&) = default;
};

struct Agent {
    int id = 0;
    Vec2 position;
    double speed = 1.0;
    double heading = 0.0;
    std::optional<double> sensing_range;

    friend bool operator==(const Agent&, const Agent&) = default;
};

struct ControllerConfig {
    int lookahead_depth = 1;
    double sparsity_gamma = 0.0;
    int sparsity_neighbors = 0;
    double cooperation_delta = 0.0;
    int neighbor_count = 2;
    double reward_epsilon = 1e-6;
    double tie_tolerance = 1e-9;
    std::size_t node_budget = 1'000'000;
    bool return_to_base = false;

    friend bool operator==(const ControllerConfig&, const ControllerConfig&) = default;
};

// Target and agent ids must be strictly increasing in list order, so list
// index order doubles as id order for tie-breaking.
struct MissionSpec {
    Box space;
    Vec2 base;
    double mission_time = 1000.0;
    std::vector<Target> targets;
    std::vector<Agent> agents;
    ControllerConfig config;

    friend bool operator==(const MissionSpec&, const MissionSpec&) = default;
};

// Fraction of the initial reward still available at time t, in [0, 1].
double discount(const Target& target, double t);
double reward_at(const Target& target, double t);

// Deadline used for the average collection rate: min(D-bar, T).
double effective_deadline(const Target& target, double mission_time);

bool is_visit(Vec2 agent_position, const Target& target, double tie_tolerance = 1e-9);

// First time the discount drops below reward_epsilon; +inf if never.
double expiry_time(const Target& target, double reward_epsilon);

std::vector<std::string> validation_errors(const MissionSpec& spec);
void validate(const MissionSpec& spec);

}  // namespace crh
