#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "crh/cooperation.hpp"
#include "crh/mission.hpp"
#include "crh/state.hpp"

namespace crh {

// A validated mission plus the per-target data every control step reuses.
class Problem {
public:
    explicit Problem(MissionSpec spec);

    const MissionSpec& spec() const { return spec_; }
    const ControllerConfig& config() const { return spec_.config; }
    const Target& target(int i) const { return spec_.targets[i]; }
    const Agent& agent(int j) const { return spec_.agents[j]; }
    int target_count() const { return static_cast<int>(spec_.targets.size()); }
    int agent_count() const { return static_cast<int>(spec_.agents.size()); }

    // D_i / lambda_i, the inverse of the average reward decay rate.
    double cost_scale(int i) const { return scale_[i]; }
    double target_distance(int i, int l) const { return dist_[i * spec_.targets.size() + l]; }
    double eta(int i, Vec2 x, double zeta) const {
        return distance(x, spec_.targets[i].position) * scale_[i] + zeta;
    }
    // Reward for reaching target i at time t; zero past the mission time.
    double collectible_reward(int i, double t) const;
    double expiry(int i) const { return expiry_[i]; }

private:
    MissionSpec spec_;
    std::vector<double> scale_;
    std::vector<double> dist_;
    std::vector<double> expiry_;
};

MissionState initial_state(const MissionSpec& spec);

double planning_horizon(const Problem& problem, const MissionState& state);

struct ClosestPoint {
    Vec2 point;
    double heading = 0.0;
    bool degenerate = false;
};

// Point at `radius` along the ray from agent toward target.
ClosestPoint closest_point(Vec2 agent, Vec2 target, double radius);

double sparsity_factor(const Problem& problem, int target, std::span<const int> live);

// zeta for every target in `live`; entries for other targets are zero.
std::vector<double> sparsity_table(const Problem& problem, std::span<const int> live);

double travel_cost(const Problem& problem, Vec2 point, int target, std::span<const int> live);

struct CircleCandidate {
    int target = -1;
    Vec2 point;
    double heading = 0.0;
    bool at_closest_point = true;
};

// Targets of `contenders` that minimize eta somewhere on the circle, each
// with the winning point nearest its closest point. Ties within tolerance win.
std::vector<CircleCandidate> active_on_circle(const Problem& problem, Vec2 center, double radius,
                                              std::span<const int> contenders,
                                              std::span<const double> zeta);

// Targets whose eta is minimal at their own closest point.
std::vector<int> closest_point_test_set(const Problem& problem, Vec2 center, double radius,
                                        std::span<const int> contenders,
                                        std::span<const double> zeta);

struct ActiveSetResult {
    int agent = 0;
    std::vector<int> active_targets;
    std::map<int, Vec2> closest_points;
    std::map<int, double> candidate_headings;
    std::vector<CircleCandidate> candidates;
};

ActiveSetResult active_targets(const Problem& problem, const MissionState& state, int agent,
                               double horizon);

struct TourProjection {
    int agent = 0;
    std::vector<int> order;
    std::vector<double> visit_times;
    double reward = 0.0;
};

// Greedy minimum-eta chain over `assigned`. Sparsity factors are taken over
// `context` minus the targets already placed on the tour. When `first` is
// in `assigned` the tour starts with it.
TourProjection project_tour(const Problem& problem, int agent, Vec2 start, double start_time,
                            std::span<const int> assigned, std::span<const int> context,
                            std::optional<int> first = std::nullopt);

struct HeadingCandidate {
    int target = -1;
    Vec2 endpoint;
    double heading = 0.0;
    bool capture = false;
};

struct StepPlan {
    double horizon = 0.0;
    TargetPartition partition;
    std::vector<std::vector<HeadingCandidate>> candidates;  // per agent
};

StepPlan plan_step(const Problem& problem, const MissionState& state);

struct JointOutcome {
    double immediate = 0.0;
    double reward_to_go = 0.0;
    std::vector<int> captured;
    std::vector<int> next_live;

    double value() const { return immediate + reward_to_go; }
};

// commitments[j] is the target agent j's tour must start with, or -1.
JointOutcome evaluate_joint(const Problem& problem, const MissionState& state, double horizon,
                            const TargetPartition& partition, std::span<const Vec2> endpoints,
                            std::span<const int> commitments, bool with_reward_to_go);

std::vector<Vec2> endpoints_for(const Problem& problem, const MissionState& state,
                                std::span<const double> headings, double horizon);

double immediate_reward(const Problem& problem, const MissionState& state,
                        std::span<const double> headings, double horizon);
double reward_to_go(const Problem& problem, const MissionState& state,
                    std::span<const double> headings, double horizon);
// J_I + J_A for arbitrary headings, with no tour commitments.
double objective(const Problem& problem, const MissionState& state,
                 std::span<const double> headings, double horizon);

// (target index, agent index) -> earliest time the agent could reach the target.
std::map<std::pair<int, int>, double> visit_time_lower_bound(const Problem& problem,
                                                             const MissionState& state,
                                                             std::span<const double> headings,
                                                             double horizon);

double action_horizon(const Problem& problem, const MissionState& state,
                      std::span<const double> headings, double horizon);

}  // namespace crh
