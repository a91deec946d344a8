#include "crh/mission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "crh/errors.hpp"

namespace crh {

double discount(const Target& target, double t) {
    const double d = target.deadline;
    double phi = 0.0;
    if (t <= d) {
        phi = 1.0 - target.alpha / d * t;
    } else {
        phi = (1.0 - target.alpha) * std::exp(-target.beta * (t - d));
    }
    return std::clamp(phi, 0.0, 1.0);
}

double reward_at(const Target& target, double t) {
    return target.initial_reward * discount(target, t);
}

double effective_deadline(const Target& target, double mission_time) {
    return std::min(target.deadline, mission_time);
}

bool is_visit(Vec2 agent_position, const Target& target, double tie_tolerance) {
    return distance(agent_position, target.position) <= target.capture_radius + tie_tolerance;
}

double expiry_time(const Target& target, double reward_epsilon) {
    const double tail = 1.0 - target.alpha;
    if (tail < reward_epsilon) {
        // Linear part crosses the threshold before D.
        return target.deadline * (1.0 - reward_epsilon) / target.alpha;
    }
    if (target.beta <= 0.0) return std::numeric_limits<double>::infinity();
    return target.deadline + std::log(tail / reward_epsilon) / target.beta;
}

namespace {

bool finite_point(Vec2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

std::vector<std::string> validation_errors(const MissionSpec& spec) {
    std::vector<std::string> out;
    auto fail = [&](const std::string& path, const std::string& msg) {
        out.push_back(path + ": " + msg);
    };

    if (!finite_point(spec.space.min) || !finite_point(spec.space.max) ||
        spec.space.min.x > spec.space.max.x || spec.space.min.y > spec.space.max.y) {
        fail("space", "min must not exceed max");
    }
    if (!finite_point(spec.base) || !spec.space.contains(spec.base)) {
        fail("base", "must lie inside the space");
    }
    if (!(spec.mission_time > 0.0) || !std::isfinite(spec.mission_time)) {
        fail("mission_time", "must be positive");
    }
    if (spec.agents.empty()) fail("agents", "at least one agent is required");

    for (std::size_t k = 0; k < spec.targets.size(); ++k) {
        const Target& t = spec.targets[k];
        const std::string p = "targets[" + std::to_string(k) + "].";
        if (k > 0 && t.id <= spec.targets[k - 1].id) fail(p + "id", "ids must be strictly increasing");
        if (!finite_point(t.position) || !spec.space.contains(t.position)) {
            fail(p + "position", "must lie inside the space");
        }
        if (!(t.initial_reward > 0.0) || !std::isfinite(t.initial_reward)) {
            fail(p + "initial_reward", "must be positive");
        }
        if (!(t.alpha >= 0.0 && t.alpha <= 1.0)) fail(p + "alpha", "must be in [0, 1]");
        if (!(t.beta >= 0.0) || !std::isfinite(t.beta)) fail(p + "beta", "must be nonnegative");
        if (!(t.deadline > 0.0) || !std::isfinite(t.deadline)) fail(p + "deadline", "must be positive");
        if (!(t.capture_radius >= 0.0) || !std::isfinite(t.capture_radius)) {
            fail(p + "capture_radius", "must be nonnegative");
        }
        if (!(t.appears_at >= 0.0) || !std::isfinite(t.appears_at)) {
            fail(p + "appears_at", "must be nonnegative");
        }
    }
    for (std::size_t k = 0; k < spec.agents.size(); ++k) {
        const Agent& a = spec.agents[k];
        const std::string p = "agents[" + std::to_string(k) + "].";
        if (k > 0 && a.id <= spec.agents[k - 1].id) fail(p + "id", "ids must be strictly increasing");
        if (!finite_point(a.position) || !spec.space.contains(a.position)) {
            fail(p + "position", "must lie inside the space");
        }
        if (!(a.speed > 0.0) || !std::isfinite(a.speed)) fail(p + "speed", "must be positive");
        if (!(a.heading >= 0.0 && a.heading < two_pi)) fail(p + "heading", "must be in [0, 2pi)");
        if (a.sensing_range && !(*a.sensing_range > 0.0)) {
            fail(p + "sensing_range", "must be positive when present");
        }
    }

    const ControllerConfig& c = spec.config;
    if (c.lookahead_depth < 1) fail("control.lookahead_depth", "must be at least 1");
    if (!(c.sparsity_gamma >= 0.0 && c.sparsity_gamma <= 1.0)) {
        fail("control.sparsity_gamma", "must be in [0, 1]");
    }
    if (c.sparsity_neighbors < 0) fail("control.sparsity_neighbors", "must be nonnegative");
    if (!(c.cooperation_delta >= 0.0 && c.cooperation_delta < 0.5)) {
        fail("control.cooperation_delta", "must be in [0, 0.5)");
    }
    if (c.neighbor_count < 1) fail("control.neighbor_count", "must be at least 1");
    if (!(c.reward_epsilon > 0.0 && c.reward_epsilon < 1.0)) {
        fail("control.reward_epsilon", "must be in (0, 1)");
    }
    if (!(c.tie_tolerance > 0.0)) fail("control.tie_tolerance", "must be positive");
    if (c.node_budget < 1) fail("control.node_budget", "must be at least 1");
    return out;
}

void validate(const MissionSpec& spec) {
    auto errors = validation_errors(spec);
    if (!errors.empty()) throw ValidationError(std::move(errors));
}

}  // namespace crh
