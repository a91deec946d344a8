#include "crh/lookahead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crh/errors.hpp"

namespace crh {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

bool improves(double v, double best) {
    if (best == neg_inf) return v > best;
    return v > best + 1e-12 * std::max(1.0, std::fabs(best));
}

std::size_t joint_count(const StepPlan& plan) {
    std::size_t p = 1;
    for (const auto& c : plan.candidates) p *= std::max<std::size_t>(c.size(), 1);
    return p;
}

// Agent 0 is the most significant digit.
std::vector<std::size_t> unflatten(const StepPlan& plan, std::size_t flat) {
    const std::size_t n = plan.candidates.size();
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t j = n; j-- > 0;) {
        const std::size_t base = std::max<std::size_t>(plan.candidates[j].size(), 1);
        idx[j] = flat % base;
        flat /= base;
    }
    return idx;
}

struct JointMove {
    std::vector<Vec2> endpoints;
    std::vector<int> commitments;
};

JointMove joint_move(const MissionState& state, const StepPlan& plan,
                     const std::vector<std::size_t>& idx) {
    JointMove m;
    const std::size_t n = plan.candidates.size();
    m.endpoints.resize(n);
    m.commitments.assign(n, -1);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& list = plan.candidates[j];
        if (list.empty()) {
            m.endpoints[j] = state.agent_positions[j];
            continue;
        }
        const HeadingCandidate& c = list[idx[j]];
        m.endpoints[j] = c.endpoint;
        if (!c.capture) m.commitments[j] = c.target;
    }
    return m;
}

double branch_value(const Problem& pb, const MissionState& state, const StepPlan& plan,
                    const std::vector<std::size_t>& idx, int depth);

double subtree_value(const Problem& pb, const MissionState& state, int depth) {
    const StepPlan plan = plan_step(pb, state);
    const std::size_t count = joint_count(plan);
    double best = neg_inf;
    for (std::size_t p = 0; p < count; ++p) {
        const double v = branch_value(pb, state, plan, unflatten(plan, p), depth);
        if (improves(v, best)) best = v;
    }
    return best;
}

double branch_value(const Problem& pb, const MissionState& state, const StepPlan& plan,
                    const std::vector<std::size_t>& idx, int depth) {
    const JointMove m = joint_move(state, plan, idx);
    const JointOutcome out =
        evaluate_joint(pb, state, plan.horizon, plan.partition, m.endpoints, m.commitments,
                       depth == 1);
    if (depth == 1 || out.next_live.empty()) return out.value();
    MissionState child{state.clock + plan.horizon, m.endpoints, out.next_live};
    return out.immediate + subtree_value(pb, child, depth - 1);
}

int choose_depth(const Problem& pb, const MissionState& state, std::size_t branching,
                 bool& truncated) {
    int depth = std::min<int>(pb.config().lookahead_depth,
                              static_cast<int>(state.live_targets.size()));
    depth = std::max(depth, 1);
    truncated = false;
    const double budget = static_cast<double>(pb.config().node_budget);
    const double b = static_cast<double>(std::max<std::size_t>(branching, 1));
    while (depth > 1 && std::pow(b, depth) > budget) {
        --depth;
        truncated = true;
    }
    return depth;
}

std::vector<double> values_for(const Problem& pb, const MissionState& state, const StepPlan& plan,
                               int depth, bool parallel) {
    const std::size_t count = joint_count(plan);
    std::vector<double> values(count, neg_inf);
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic) if (parallel && n > 1)
    for (std::int64_t p = 0; p < n; ++p) {
        values[p] = branch_value(pb, state, plan, unflatten(plan, p), depth);
    }
    return values;
}

ControlDecision solve_impl(const Problem& pb, const MissionState& state, bool parallel) {
    if (state.live_targets.empty()) throw Error("mission complete");
    ControlDecision d;
    const StepPlan plan = plan_step(pb, state);
    d.planning_horizon = plan.horizon;
    d.joint_candidates = plan.candidates;
    d.depth = choose_depth(pb, state, joint_count(plan), d.depth_truncated);
#ifdef _OPENMP
    if (omp_in_parallel()) parallel = false;
#endif
    const auto values = values_for(pb, state, plan, d.depth, parallel);
    std::size_t best = 0;
    double best_value = neg_inf;
    for (std::size_t p = 0; p < values.size(); ++p) {
        if (improves(values[p], best_value)) {
            best_value = values[p];
            best = p;
        }
    }
    d.objective_value = best_value;
    d.chosen_index = unflatten(plan, best);
    d.chosen_headings.resize(plan.candidates.size());
    for (std::size_t j = 0; j < plan.candidates.size(); ++j) {
        const auto& list = plan.candidates[j];
        d.chosen_headings[j] = list.empty() ? pb.agent(static_cast<int>(j)).heading
                                            : list[d.chosen_index[j]].heading;
    }
    d.action_horizon = action_horizon(pb, state, d.chosen_headings, plan.horizon);
    return d;
}

void collect_leaves(const Problem& pb, const MissionState& state, int depth,
                    std::vector<std::vector<std::size_t>>& path, double acc,
                    std::vector<LeafRecord>& out) {
    const StepPlan plan = plan_step(pb, state);
    const std::size_t count = joint_count(plan);
    for (std::size_t p = 0; p < count; ++p) {
        const auto idx = unflatten(plan, p);
        const JointMove m = joint_move(state, plan, idx);
        const JointOutcome o = evaluate_joint(pb, state, plan.horizon, plan.partition,
                                              m.endpoints, m.commitments, depth == 1);
        path.push_back(idx);
        if (depth == 1 || o.next_live.empty()) {
            out.push_back({path, acc + o.value()});
        } else {
            MissionState child{state.clock + plan.horizon, m.endpoints, o.next_live};
            collect_leaves(pb, child, depth - 1, path, acc + o.immediate, out);
        }
        path.pop_back();
    }
}

std::uint64_t count_visit_tree(const Problem& pb, Vec2 pos, const std::vector<int>& remaining) {
    if (remaining.empty()) return 1;
    const double v = pb.agent(0).speed;
    double h = std::numeric_limits<double>::infinity();
    for (int l : remaining) {
        const Target& t = pb.target(l);
        h = std::min(h, std::max(0.0, distance(pos, t.position) - t.capture_radius) / v);
    }
    const auto zeta = sparsity_table(pb, remaining);
    const auto active = active_on_circle(pb, pos, v * h, remaining, zeta);
    const double tol = pb.config().tie_tolerance;
    std::uint64_t total = 0;
    for (const auto& c : active) {
        const Target& t = pb.target(c.target);
        const double d = distance(pos, t.position);
        const Vec2 cap = d > t.capture_radius
                             ? pos + ((d - t.capture_radius) / d) * (t.position - pos)
                             : pos;
        std::vector<int> next;
        for (int l : remaining) {
            if (l != c.target && !is_visit(cap, pb.target(l), tol)) next.push_back(l);
        }
        total += count_visit_tree(pb, cap, next);
    }
    return total;
}

}  // namespace

ControlDecision solve(const Problem& problem, const MissionState& state) {
    return solve_impl(problem, state, true);
}

ControlDecision solve_serial(const Problem& problem, const MissionState& state) {
    return solve_impl(problem, state, false);
}

std::vector<double> root_values(const Problem& problem, const MissionState& state, int depth) {
    const StepPlan plan = plan_step(problem, state);
    return values_for(problem, state, plan, depth, false);
}

std::vector<LeafRecord> enumerate_leaves(const Problem& problem, const MissionState& state,
                                         int depth) {
    std::vector<LeafRecord> out;
    std::vector<std::vector<std::size_t>> path;
    collect_leaves(problem, state, depth, path, 0.0, out);
    return out;
}

std::uint64_t count_paths(const Problem& problem, const MissionState& state) {
    if (problem.agent_count() != 1) throw Error("count_paths requires a single agent");
    if (state.live_targets.size() > 12) throw Error("tree too large");
    return count_visit_tree(problem, state.agent_positions[0], state.live_targets);
}

}  // namespace crh
