#include "crh/cooperation.hpp"

#include <algorithm>
#include <numeric>

#include "crh/errors.hpp"

namespace crh {

std::vector<int> neighbor_set(Vec2 target, std::span<const Vec2> agents, int b) {
    if (agents.empty()) throw Error("no agents");
    std::vector<int> order(agents.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> d(agents.size());
    for (std::size_t j = 0; j < agents.size(); ++j) d[j] = distance(target, agents[j]);
    std::stable_sort(order.begin(), order.end(), [&](int a, int c) { return d[a] < d[c]; });
    order.resize(std::min<std::size_t>(std::max(b, 1), agents.size()));
    return order;
}

double relative_distance(Vec2 target, std::span<const Vec2> agents, int agent,
                         std::span<const int> neighbors) {
    if (std::find(neighbors.begin(), neighbors.end(), agent) == neighbors.end()) return 1.0;
    double sum = 0.0;
    for (int k : neighbors) sum += distance(target, agents[k]);
    if (sum == 0.0) return 0.0;
    return distance(target, agents[agent]) / sum;
}

double proximity(double delta, double cooperation_delta) {
    if (delta <= cooperation_delta) return 1.0;
    if (delta > 1.0 - cooperation_delta) return 0.0;
    return (1.0 - cooperation_delta - delta) / (1.0 - 2.0 * cooperation_delta);
}

ProximityTable proximity_table(const MissionSpec& spec, const MissionState& state) {
    const auto& agents = state.agent_positions;
    if (agents.empty()) throw Error("no agents");
    ProximityTable table;
    table.agent_count = static_cast<int>(agents.size());
    table.targets = state.live_targets;
    const std::size_t n = table.targets.size() * agents.size();
    table.direct_distances.resize(n);
    table.relative_distances.resize(n);
    table.proximities.resize(n);
    for (std::size_t row = 0; row < table.targets.size(); ++row) {
        const Vec2 y = spec.targets[table.targets[row]].position;
        const auto nb = neighbor_set(y, agents, spec.config.neighbor_count);
        for (int j = 0; j < table.agent_count; ++j) {
            const std::size_t k = row * agents.size() + j;
            table.direct_distances[k] = distance(y, agents[j]);
            table.relative_distances[k] = relative_distance(y, agents, j, nb);
            table.proximities[k] =
                proximity(table.relative_distances[k], spec.config.cooperation_delta);
        }
    }
    return table;
}

std::vector<int> TargetPartition::owned_by(int agent) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < owner.size(); ++i) {
        if (owner[i] == agent) out.push_back(static_cast<int>(i));
    }
    return out;
}

TargetPartition partition_targets(const MissionSpec& spec, const MissionState& state) {
    const int n = static_cast<int>(state.agent_positions.size());
    if (n == 0) throw Error("no agents");
    TargetPartition part;
    part.owner.assign(spec.targets.size(), -1);
    part.sizes.assign(n, 0);
    if (n == 1) {
        for (int i : state.live_targets) part.owner[i] = 0;
        part.sizes[0] = static_cast<int>(state.live_targets.size());
        return part;
    }
    const ProximityTable table = proximity_table(spec, state);
    const double tol = spec.config.tie_tolerance;
    for (std::size_t row = 0; row < table.targets.size(); ++row) {
        const int r = static_cast<int>(row);
        int best = 0;
        for (int j = 1; j < n; ++j) {
            const double pj = table.prox(r, j);
            const double pb = table.prox(r, best);
            if (pj > pb + tol) {
                best = j;
            } else if (pj >= pb - tol && table.direct(r, j) < table.direct(r, best)) {
                best = j;
            }
        }
        part.owner[table.targets[row]] = best;
        ++part.sizes[best];
    }
    return part;
}

}  // namespace crh
