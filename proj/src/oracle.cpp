#include "crh/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "crh/errors.hpp"

namespace crh {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void require_single_agent(const MissionSpec& spec, std::size_t cap) {
    validate(spec);
    if (spec.agents.size() != 1) throw Error("exhaustive oracle requires a single agent");
    if (spec.targets.size() > cap) throw Error("too many targets for exhaustive search");
    for (const auto& t : spec.targets) {
        if (t.appears_at > 0.0) throw Error("exhaustive oracle requires all targets known at start");
    }
}

// Best order among those starting with `head`, in lexicographic order.
OracleResult best_with_head(const MissionSpec& spec, int head) {
    const int m = static_cast<int>(spec.targets.size());
    std::vector<int> order;
    order.push_back(head);
    for (int i = 0; i < m; ++i) {
        if (i != head) order.push_back(i);
    }
    OracleResult best{neg_inf, {}};
    do {
        const double r = order_reward(spec, order);
        if (r > best.reward) best = {r, order};
    } while (std::next_permutation(order.begin() + 1, order.end()));
    return best;
}

OracleResult exhaustive(const MissionSpec& spec, std::size_t cap, bool parallel) {
    require_single_agent(spec, cap);
    const int m = static_cast<int>(spec.targets.size());
    if (m == 0) return {0.0, {}};
    std::vector<OracleResult> blocks(m);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int f = 0; f < m; ++f) blocks[f] = best_with_head(spec, f);
    OracleResult best = blocks[0];
    for (int f = 1; f < m; ++f) {
        if (blocks[f].reward > best.reward) best = blocks[f];
    }
    return best;
}

std::vector<double> own_zeta(const MissionSpec& spec, std::span<const int> live) {
    std::vector<double> z(spec.targets.size(), 0.0);
    const auto& cfg = spec.config;
    for (int i : live) {
        std::vector<std::pair<double, int>> nb;
        for (int l : live) {
            if (l != i) nb.emplace_back(distance(spec.targets[i].position, spec.targets[l].position), l);
        }
        std::sort(nb.begin(), nb.end());
        double w = 1.0;
        for (int k = 0; k < std::min<int>(cfg.sparsity_neighbors, static_cast<int>(nb.size())); ++k) {
            w *= cfg.sparsity_gamma;
            const Target& t = spec.targets[nb[k].second];
            const double rate = t.initial_reward / std::min(t.deadline, spec.mission_time);
            z[i] += w * nb[k].first / rate;
        }
    }
    return z;
}

GridCheck grid_check(const Problem& pb, const MissionState& state, int n, bool parallel) {
    const int agents = static_cast<int>(state.agent_positions.size());
    if (n < 8) throw Error("grid needs at least 8 headings");
    if (agents > 2 || n > 720) throw Error("grid too large");
    const double h = planning_horizon(pb, state);
    const TargetPartition part = partition_targets(pb.spec(), state);
    std::vector<double> angles(n);
    for (int k = 0; k < n; ++k) angles[k] = two_pi * k / n;
    const int outer = n;
    const int inner = agents == 2 ? n : 1;
    std::vector<GridCheck> rows(outer);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int a = 0; a < outer; ++a) {
        GridCheck row{neg_inf, {}};
        std::vector<double> hd(agents);
        hd[0] = angles[a];
        for (int b = 0; b < inner; ++b) {
            if (agents == 2) hd[1] = angles[b];
            const auto ends = endpoints_for(pb, state, hd, h);
            const double v = evaluate_joint(pb, state, h, part, ends, {}, true).value();
            if (v > row.best_value) row = {v, hd};
        }
        rows[a] = row;
    }
    GridCheck best = rows[0];
    for (int a = 1; a < outer; ++a) {
        if (rows[a].best_value > best.best_value) best = rows[a];
    }
    return best;
}

}  // namespace

double order_reward(const MissionSpec& spec, std::span<const int> order) {
    const Agent& a = spec.agents.front();
    Vec2 p = a.position;
    double t = 0.0;
    double sum = 0.0;
    for (int i : order) {
        const Target& tg = spec.targets[i];
        const double d = distance(p, tg.position);
        const double leg = std::max(0.0, d - tg.capture_radius);
        t += leg / a.speed;
        if (leg > 0.0) p = p + (leg / d) * (tg.position - p);
        if (t <= spec.mission_time) sum += reward_at(tg, t);
    }
    return sum;
}

OracleResult exhaustive_optimal(const MissionSpec& spec, std::size_t cap) {
    return exhaustive(spec, cap, true);
}

OracleResult exhaustive_optimal_serial(const MissionSpec& spec, std::size_t cap) {
    return exhaustive(spec, cap, false);
}

TwoTargetResult two_target_optimal(const MissionSpec& spec, double tie_margin) {
    if (spec.targets.size() != 2 || spec.agents.size() != 1) {
        throw Error("analytic form requires one agent and two targets");
    }
    const Target& t1 = spec.targets[0];
    const Target& t2 = spec.targets[1];
    if (t1.alpha != 1.0 || t2.alpha != 1.0) throw Error("analytic form requires linear decay");
    const Agent& a = spec.agents[0];
    const double d1 = distance(a.position, t1.position) / a.speed;
    const double d2 = distance(a.position, t2.position) / a.speed;
    const double d12 = distance(t1.position, t2.position) / a.speed;
    const double r1 = t1.initial_reward / t1.deadline;
    const double r2 = t2.initial_reward / t2.deadline;
    TwoTargetResult res;
    res.margin = r1 * (d2 - d1 + d12) - r2 * (d1 - d2 + d12);
    if (std::fabs(res.margin) < tie_margin) {
        res.label = TwoTargetLabel::tie;
    } else {
        res.label = res.margin > 0.0 ? TwoTargetLabel::first_second : TwoTargetLabel::second_first;
    }
    return res;
}

GridCheck discretized_control_check(const Problem& problem, const MissionState& state, int n) {
    return grid_check(problem, state, n, true);
}

GridCheck discretized_control_check_serial(const Problem& problem, const MissionState& state,
                                           int n) {
    return grid_check(problem, state, n, false);
}

std::vector<int> active_set_bruteforce(const MissionSpec& spec, const MissionState& state,
                                       int agent, double horizon, int n,
                                       std::span<const int> contenders) {
    if (n < 100) throw Error("brute force needs at least 100 points");
    const std::span<const int> set =
        contenders.empty() ? std::span<const int>(state.live_targets) : contenders;
    const auto zeta = own_zeta(spec, state.live_targets);
    const Vec2 c = state.agent_positions[agent];
    const double r = spec.agents[agent].speed * horizon;
    std::vector<char> hit(spec.targets.size(), 0);
    std::vector<double> eta(set.size());
    for (int k = 0; k < n; ++k) {
        const double th = two_pi * k / n;
        const Vec2 x{c.x + r * std::cos(th), c.y + r * std::sin(th)};
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t q = 0; q < set.size(); ++q) {
            const Target& t = spec.targets[set[q]];
            const double rate = t.initial_reward / std::min(t.deadline, spec.mission_time);
            eta[q] = distance(x, t.position) / rate + zeta[set[q]];
            lo = std::min(lo, eta[q]);
        }
        const double band = 1e-6 * std::max(1.0, std::fabs(lo));
        for (std::size_t q = 0; q < set.size(); ++q) {
            if (eta[q] <= lo + band) hit[set[q]] = 1;
        }
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < hit.size(); ++i) {
        if (hit[i]) out.push_back(static_cast<int>(i));
    }
    return out;
}

}  // namespace crh
