#include "crh/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crh/errors.hpp"

namespace crh {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double slack_for(double tol, double value) { return tol * std::max(1.0, std::fabs(value)); }

// zeta of target i over the targets in `present` other than i.
double zeta_over(const Problem& pb, int i, std::span<const int> present,
                 std::vector<std::pair<double, int>>& scratch) {
    const auto& cfg = pb.config();
    if (cfg.sparsity_gamma == 0.0 || cfg.sparsity_neighbors == 0) return 0.0;
    scratch.clear();
    for (int l : present) {
        if (l != i) scratch.emplace_back(pb.target_distance(i, l), l);
    }
    const std::size_t k = std::min<std::size_t>(cfg.sparsity_neighbors, scratch.size());
    std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k),
                      scratch.end());
    double sum = 0.0;
    double w = 1.0;
    for (std::size_t n = 0; n < k; ++n) {
        w *= cfg.sparsity_gamma;
        sum += w * scratch[n].first * pb.cost_scale(scratch[n].second);
    }
    return sum;
}

bool contains(std::span<const int> sorted, int v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

void erase_value(std::vector<int>& sorted, int v) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    if (it != sorted.end() && *it == v) sorted.erase(it);
}

struct Contender {
    int id;
    Vec2 y;
    double rho;
    double theta;
    double scale;
    double zeta;
};

// Exact search for the points of a circle where one target minimizes eta.
// The distance from a fixed point to a point on the circle is monotone in
// their angular gap, which gives exact eta bounds over any arc.
class CircleSearch {
public:
    CircleSearch(const Problem& pb, Vec2 center, double radius, std::span<const int> contenders,
                 std::span<const double> zeta)
        : c_(center), r_(radius), tol_(pb.config().tie_tolerance) {
        cs_.reserve(contenders.size());
        for (int i : contenders) {
            const Vec2 y = pb.target(i).position;
            const double rho = distance(c_, y);
            cs_.push_back({i, y, rho, rho > 0.0 ? heading_to(c_, y) : 0.0, pb.cost_scale(i),
                           zeta[i]});
        }
    }

    std::size_t size() const { return cs_.size(); }
    const Contender& at(std::size_t k) const { return cs_[k]; }

    double eta(std::size_t k, Vec2 p) const {
        return distance(p, cs_[k].y) * cs_[k].scale + cs_[k].zeta;
    }

    bool wins(std::size_t k, Vec2 p) const {
        const double e = eta(k, p);
        const double slack = slack_for(tol_, e);
        for (std::size_t i = 0; i < cs_.size(); ++i) {
            if (i != k && eta(i, p) < e - slack) return false;
        }
        return true;
    }

    Vec2 closest(std::size_t k) const {
        const Contender& t = cs_[k];
        if (t.rho == 0.0) return c_ + Vec2{r_, 0.0};
        return c_ + (r_ / t.rho) * (t.y - c_);
    }

    Vec2 point_at(double theta) const { return c_ + r_ * unit(theta); }

    std::optional<CircleCandidate> search(std::size_t k) const {
        const Contender& t = cs_[k];
        const Vec2 ck = closest(k);
        if (wins(k, ck)) return CircleCandidate{t.id, ck, t.theta, true};
        if (r_ == 0.0) return std::nullopt;
        const double lo = std::fabs(t.rho - r_) * t.scale + t.zeta;
        const double slack = slack_for(tol_, lo);
        for (std::size_t i = 0; i < cs_.size(); ++i) {
            if (i != k && (cs_[i].rho + r_) * cs_[i].scale + cs_[i].zeta < lo - slack) {
                return std::nullopt;
            }
        }
        const auto plus = first_win(k, 1.0, 0.0, std::numbers::pi, 0);
        const auto minus = first_win(k, -1.0, 0.0, std::numbers::pi, 0);
        if (!plus && !minus) return std::nullopt;
        double theta = 0.0;
        if (plus && (!minus || *plus <= *minus)) {
            theta = t.theta + *plus;
        } else {
            theta = t.theta - *minus;
        }
        theta = normalize_angle(theta);
        return CircleCandidate{t.id, point_at(theta), theta, false};
    }

private:
    static bool arc_contains(double start, double width, double angle) {
        return normalize_angle(angle - start) <= width;
    }

    std::optional<double> first_win(std::size_t k, double side, double d0, double d1,
                                    int depth) const {
        const Contender& t = cs_[k];
        const double th0 = t.theta + side * d0;
        const double th1 = t.theta + side * d1;
        const Vec2 p0 = point_at(th0);
        const Vec2 p1 = point_at(th1);
        const double lo = eta(k, p0);
        const double slack = slack_for(tol_, lo);
        const double start = side > 0.0 ? th0 : th1;
        const double width = d1 - d0;
        for (std::size_t i = 0; i < cs_.size(); ++i) {
            if (i == k) continue;
            const Contender& o = cs_[i];
            const double far = arc_contains(start, width, o.theta + std::numbers::pi)
                                   ? o.rho + r_
                                   : std::max(distance(p0, o.y), distance(p1, o.y));
            if (far * o.scale + o.zeta < lo - slack) return std::nullopt;
        }
        if (wins(k, p0)) return d0;
        if (depth >= 56) return std::nullopt;
        const double mid = 0.5 * (d0 + d1);
        if (auto left = first_win(k, side, d0, mid, depth + 1)) return left;
        return first_win(k, side, mid, d1, depth + 1);
    }

    Vec2 c_;
    double r_;
    double tol_;
    std::vector<Contender> cs_;
};

}  // namespace

Problem::Problem(MissionSpec spec) : spec_(std::move(spec)) {
    validate(spec_);
    const std::size_t m = spec_.targets.size();
    scale_.resize(m);
    expiry_.resize(m);
    dist_.resize(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        const Target& t = spec_.targets[i];
        scale_[i] = effective_deadline(t, spec_.mission_time) / t.initial_reward;
        expiry_[i] = expiry_time(t, spec_.config.reward_epsilon);
        for (std::size_t l = 0; l < m; ++l) {
            dist_[i * m + l] = distance(t.position, spec_.targets[l].position);
        }
    }
}

double Problem::collectible_reward(int i, double t) const {
    if (t > spec_.mission_time) return 0.0;
    return reward_at(spec_.targets[i], t);
}

MissionState initial_state(const MissionSpec& spec) {
    MissionState s;
    for (const Agent& a : spec.agents) s.agent_positions.push_back(a.position);
    for (std::size_t i = 0; i < spec.targets.size(); ++i) {
        if (spec.targets[i].appears_at <= 0.0) s.live_targets.push_back(static_cast<int>(i));
    }
    return s;
}

double planning_horizon(const Problem& problem, const MissionState& state) {
    if (state.live_targets.empty()) throw Error("mission complete");
    double h = inf;
    for (int j = 0; j < static_cast<int>(state.agent_positions.size()); ++j) {
        const double v = problem.agent(j).speed;
        for (int l : state.live_targets) {
            const Target& t = problem.target(l);
            const double gap = distance(state.agent_positions[j], t.position) - t.capture_radius;
            h = std::min(h, std::max(0.0, gap) / v);
        }
    }
    return h;
}

ClosestPoint closest_point(Vec2 agent, Vec2 target, double radius) {
    const double d = distance(agent, target);
    if (d == 0.0) return {agent + Vec2{radius, 0.0}, 0.0, true};
    return {agent + (radius / d) * (target - agent), heading_to(agent, target), false};
}

double sparsity_factor(const Problem& problem, int target, std::span<const int> live) {
    std::vector<std::pair<double, int>> scratch;
    return zeta_over(problem, target, live, scratch);
}

std::vector<double> sparsity_table(const Problem& problem, std::span<const int> live) {
    std::vector<double> z(problem.target_count(), 0.0);
    const auto& cfg = problem.config();
    if (cfg.sparsity_gamma == 0.0 || cfg.sparsity_neighbors == 0) return z;
    std::vector<std::pair<double, int>> scratch;
    for (int i : live) z[i] = zeta_over(problem, i, live, scratch);
    return z;
}

double travel_cost(const Problem& problem, Vec2 point, int target, std::span<const int> live) {
    return problem.eta(target, point, sparsity_factor(problem, target, live));
}

std::vector<CircleCandidate> active_on_circle(const Problem& problem, Vec2 center, double radius,
                                              std::span<const int> contenders,
                                              std::span<const double> zeta) {
    const CircleSearch search(problem, center, radius, contenders, zeta);
    std::vector<CircleCandidate> out;
    for (std::size_t k = 0; k < search.size(); ++k) {
        if (auto c = search.search(k)) out.push_back(*c);
    }
    return out;
}

std::vector<int> closest_point_test_set(const Problem& problem, Vec2 center, double radius,
                                        std::span<const int> contenders,
                                        std::span<const double> zeta) {
    const CircleSearch search(problem, center, radius, contenders, zeta);
    std::vector<int> out;
    for (std::size_t k = 0; k < search.size(); ++k) {
        if (search.wins(k, search.closest(k))) out.push_back(search.at(k).id);
    }
    return out;
}

ActiveSetResult active_targets(const Problem& problem, const MissionState& state, int agent,
                               double horizon) {
    if (state.live_targets.empty()) throw Error("mission complete");
    const auto zeta = sparsity_table(problem, state.live_targets);
    const Vec2 x = state.agent_positions[agent];
    const double r = problem.agent(agent).speed * horizon;
    ActiveSetResult res;
    res.agent = agent;
    res.candidates = active_on_circle(problem, x, r, state.live_targets, zeta);
    for (const auto& c : res.candidates) {
        res.active_targets.push_back(c.target);
        res.closest_points[c.target] = closest_point(x, problem.target(c.target).position, r).point;
        res.candidate_headings[c.target] = c.heading;
    }
    return res;
}

TourProjection project_tour(const Problem& problem, int agent, Vec2 start, double start_time,
                            std::span<const int> assigned, std::span<const int> context,
                            std::optional<int> first) {
    TourProjection tour;
    tour.agent = agent;
    std::vector<int> remaining(assigned.begin(), assigned.end());
    std::vector<int> present(context.begin(), context.end());
    const double v = problem.agent(agent).speed;
    const auto& cfg = problem.config();
    const bool dynamic_zeta = cfg.sparsity_gamma > 0.0 && cfg.sparsity_neighbors > 0;
    std::vector<std::pair<double, int>> scratch;
    Vec2 p = start;
    double t = start_time;
    bool use_first = first.has_value() && contains(remaining, *first);
    while (!remaining.empty()) {
        int pick = -1;
        if (use_first) {
            pick = *first;
            use_first = false;
        } else {
            double best = inf;
            for (int r : remaining) {
                const double z = dynamic_zeta ? zeta_over(problem, r, present, scratch) : 0.0;
                const double e = problem.eta(r, p, z);
                if (e < best) {
                    best = e;
                    pick = r;
                }
            }
        }
        const Target& tg = problem.target(pick);
        const double d = distance(p, tg.position);
        const double leg = std::max(0.0, d - tg.capture_radius);
        t += leg / v;
        if (leg > 0.0) p = p + (leg / d) * (tg.position - p);
        tour.order.push_back(pick);
        tour.visit_times.push_back(t);
        if (t < problem.expiry(pick)) tour.reward += problem.collectible_reward(pick, t);
        erase_value(remaining, pick);
        erase_value(present, pick);
    }
    return tour;
}

StepPlan plan_step(const Problem& problem, const MissionState& state) {
    StepPlan plan;
    plan.horizon = planning_horizon(problem, state);
    plan.partition = partition_targets(problem.spec(), state);
    const auto zeta = sparsity_table(problem, state.live_targets);
    const double tol = problem.config().tie_tolerance;
    const int n = static_cast<int>(state.agent_positions.size());
    plan.candidates.resize(n);
    for (int j = 0; j < n; ++j) {
        const Vec2 x = state.agent_positions[j];
        const double r = problem.agent(j).speed * plan.horizon;
        auto own = plan.partition.owned_by(j);
        const std::span<const int> contenders =
            own.empty() ? std::span<const int>(state.live_targets) : std::span<const int>(own);
        auto& list = plan.candidates[j];
        for (const auto& c : active_on_circle(problem, x, r, contenders, zeta)) {
            list.push_back({c.target, c.point, c.heading, false});
        }
        for (int l : state.live_targets) {
            const Target& tg = problem.target(l);
            if (distance(x, tg.position) - tg.capture_radius > r + slack_for(tol, r)) continue;
            const ClosestPoint cp = closest_point(x, tg.position, r);
            auto same = std::find_if(list.begin(), list.end(), [&](const HeadingCandidate& h) {
                return h.target == l && h.endpoint == cp.point;
            });
            if (same != list.end()) {
                same->capture = true;
            } else {
                list.push_back({l, cp.point, cp.heading, true});
            }
        }
        std::stable_sort(list.begin(), list.end(),
                         [](const HeadingCandidate& a, const HeadingCandidate& b) {
                             if (a.target != b.target) return a.target < b.target;
                             return a.capture && !b.capture;
                         });
    }
    return plan;
}

JointOutcome evaluate_joint(const Problem& problem, const MissionState& state, double horizon,
                            const TargetPartition& partition, std::span<const Vec2> endpoints,
                            std::span<const int> commitments, bool with_reward_to_go) {
    JointOutcome out;
    const double t1 = state.clock + horizon;
    const double tol = problem.config().tie_tolerance;
    out.next_live.reserve(state.live_targets.size());
    for (int l : state.live_targets) {
        const Target& tg = problem.target(l);
        bool hit = false;
        for (const Vec2& e : endpoints) {
            if (is_visit(e, tg, tol)) {
                hit = true;
                break;
            }
        }
        if (hit) {
            out.immediate += problem.collectible_reward(l, t1);
            out.captured.push_back(l);
        } else if (problem.expiry(l) > t1) {
            out.next_live.push_back(l);
        }
    }
    if (!with_reward_to_go || out.next_live.empty()) return out;
    std::vector<int> subset;
    for (int j = 0; j < static_cast<int>(endpoints.size()); ++j) {
        subset.clear();
        for (int l : out.next_live) {
            if (partition.owner[l] == j) subset.push_back(l);
        }
        if (subset.empty()) continue;
        std::optional<int> first;
        if (!commitments.empty() && commitments[j] >= 0) first = commitments[j];
        out.reward_to_go +=
            project_tour(problem, j, endpoints[j], t1, subset, out.next_live, first).reward;
    }
    return out;
}

std::vector<Vec2> endpoints_for(const Problem& problem, const MissionState& state,
                                std::span<const double> headings, double horizon) {
    std::vector<Vec2> ends(state.agent_positions.size());
    for (std::size_t j = 0; j < ends.size(); ++j) {
        ends[j] = advance(state.agent_positions[j], headings[j],
                          problem.agent(static_cast<int>(j)).speed, horizon);
    }
    return ends;
}

double immediate_reward(const Problem& problem, const MissionState& state,
                        std::span<const double> headings, double horizon) {
    const auto ends = endpoints_for(problem, state, headings, horizon);
    TargetPartition none;
    return evaluate_joint(problem, state, horizon, none, ends, {}, false).immediate;
}

double reward_to_go(const Problem& problem, const MissionState& state,
                    std::span<const double> headings, double horizon) {
    const auto ends = endpoints_for(problem, state, headings, horizon);
    const auto part = partition_targets(problem.spec(), state);
    return evaluate_joint(problem, state, horizon, part, ends, {}, true).reward_to_go;
}

double objective(const Problem& problem, const MissionState& state,
                 std::span<const double> headings, double horizon) {
    const auto ends = endpoints_for(problem, state, headings, horizon);
    const auto part = partition_targets(problem.spec(), state);
    return evaluate_joint(problem, state, horizon, part, ends, {}, true).value();
}

std::map<std::pair<int, int>, double> visit_time_lower_bound(const Problem& problem,
                                                             const MissionState& state,
                                                             std::span<const double> headings,
                                                             double horizon) {
    const auto ends = endpoints_for(problem, state, headings, horizon);
    std::map<std::pair<int, int>, double> out;
    for (int l : state.live_targets) {
        for (int j = 0; j < static_cast<int>(ends.size()); ++j) {
            out[{l, j}] = state.clock + horizon +
                          distance(ends[j], problem.target(l).position) / problem.agent(j).speed;
        }
    }
    return out;
}

double action_horizon(const Problem& problem, const MissionState& state,
                      std::span<const double> headings, double horizon) {
    const double tol = problem.config().tie_tolerance;
    const double t_min = tol * std::max(1.0, horizon);
    const auto& live = state.live_targets;
    double best = horizon;
    std::vector<std::pair<double, std::pair<int, int>>> crossings;
    for (std::size_t j = 0; j < state.agent_positions.size(); ++j) {
        const Vec2 x = state.agent_positions[j];
        const double v = problem.agent(static_cast<int>(j)).speed;
        const Vec2 u = unit(headings[j]);
        crossings.clear();
        for (std::size_t a = 0; a < live.size(); ++a) {
            const Vec2 ya = problem.target(live[a]).position;
            for (std::size_t b = a + 1; b < live.size(); ++b) {
                const Vec2 yb = problem.target(live[b]).position;
                const Vec2 wa = x - ya;
                const Vec2 wb = x - yb;
                const double c0 = dot(wa, wa) - dot(wb, wb);
                const double c1 = 2.0 * v * dot(u, yb - ya);
                if (std::fabs(c1) <= 1e-12 * std::max(1.0, norm(yb - ya))) continue;
                const double t = -c0 / c1;
                if (t > t_min && t < best) crossings.push_back({t, {live[a], live[b]}});
            }
        }
        std::sort(crossings.begin(), crossings.end());
        for (const auto& [t, pair] : crossings) {
            if (t >= best) break;
            const Vec2 p = x + (v * t) * u;
            const double da = distance(p, problem.target(pair.first).position);
            const double slack = slack_for(tol, da);
            bool nearest = true;
            for (int i : live) {
                if (distance(p, problem.target(i).position) < da - slack) {
                    nearest = false;
                    break;
                }
            }
            if (nearest) {
                best = t;
                break;
            }
        }
    }
    return best;
}

}  // namespace crh
