#include "crh/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "crh/errors.hpp"

namespace crh {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::control_evaluated: return "control_evaluated";
        case EventKind::target_visited: return "target_visited";
        case EventKind::target_appeared: return "target_appeared";
        case EventKind::target_expired: return "target_expired";
        case EventKind::multiple_immediate_target: return "multiple_immediate_target";
        case EventKind::mission_complete: return "mission_complete";
    }
    return "unknown";
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr std::size_t max_steps = 1'000'000;

enum class Status { pending, unseen, known, visited, expired };

double segment_point_distance(Vec2 a, Vec2 b, Vec2 p) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(a, p);
    const double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(a + s * ab, p);
}

// Grid of cells swept by range-limited agents while no target is known.
// A cell counts as swept once a path passes within half the sensing range of
// its centre, which puts the whole cell inside the sensing disc.
class Coverage {
public:
    Coverage(const Box& space, double range) : space_(space), reach_(0.5 * range) {
        nx_ = std::max(1, static_cast<int>(std::ceil(space.width() / reach_)));
        ny_ = std::max(1, static_cast<int>(std::ceil(space.height() / reach_)));
        swept_.assign(static_cast<std::size_t>(nx_) * ny_, false);
    }

    double reach() const { return reach_; }

    Vec2 center(int k) const {
        const double cx = std::min(space_.min.x + (k % nx_ + 0.5) * reach_, space_.max.x);
        const double cy = std::min(space_.min.y + (k / nx_ + 0.5) * reach_, space_.max.y);
        return {cx, cy};
    }

    void sweep(Vec2 a, Vec2 b) {
        for (std::size_t k = 0; k < swept_.size(); ++k) {
            if (!swept_[k] && segment_point_distance(a, b, center(static_cast<int>(k))) <= reach_ * (1.0 + 1e-9)) {
                swept_[k] = true;
            }
        }
    }

    std::optional<int> nearest_open(Vec2 p) const {
        std::optional<int> best;
        double bd = inf;
        for (std::size_t k = 0; k < swept_.size(); ++k) {
            if (swept_[k]) continue;
            const double d = distance(p, center(static_cast<int>(k)));
            if (d < bd) {
                bd = d;
                best = static_cast<int>(k);
            }
        }
        return best;
    }

    void reset() { std::fill(swept_.begin(), swept_.end(), false); }

private:
    Box space_;
    double reach_;
    int nx_ = 1;
    int ny_ = 1;
    std::vector<bool> swept_;
};

class Simulation {
public:
    explicit Simulation(const MissionSpec& spec)
        : pb_(spec),
          n_(pb_.agent_count()),
          m_(pb_.target_count()),
          tol_(spec.config.tie_tolerance),
          status_(m_, Status::pending) {
        for (const Agent& a : spec.agents) {
            pos_.push_back(a.position);
            heading_.push_back(a.heading);
            if (!a.sensing_range) {
                full_info_ = true;
            } else {
                min_range_ = std::min(min_range_, *a.sensing_range);
            }
        }
        if (!full_info_) coverage_.emplace(spec.space, min_range_);
        log_.trajectories.resize(n_);
        sample();
    }

    MissionLog run() {
        const double T = pb_.spec().mission_time;
        for (std::size_t step = 0;; ++step) {
            if (step >= max_steps) throw Error("step limit exceeded");
            settle();
            if (clock_ >= T) break;
            const auto live = known();
            if (!live.empty()) {
                plan_and_move(live);
            } else if (any(Status::unseen) && !full_info_) {
                explore();
            } else if (any(Status::pending)) {
                hold();
            } else {
                break;
            }
        }
        log_.completion_time = std::min(clock_, T);
        push({clock_, EventKind::mission_complete});
        if (pb_.config().return_to_base) return_to_base();
        return std::move(log_);
    }

private:
    void push(MissionEvent e) { log_.events.push_back(e); }

    void sample() {
        for (int j = 0; j < n_; ++j) log_.trajectories[j].push_back({clock_, pos_[j], heading_[j]});
    }

    bool any(Status s) const { return std::find(status_.begin(), status_.end(), s) != status_.end(); }

    std::vector<int> known() const {
        std::vector<int> out;
        for (int i = 0; i < m_; ++i) {
            if (status_[i] == Status::known) out.push_back(i);
        }
        return out;
    }

    bool sees(int i) const {
        if (full_info_) return true;
        for (int j = 0; j < n_; ++j) {
            const auto& r = pb_.agent(j).sensing_range;
            if (distance(pos_[j], pb_.target(i).position) <= *r + tol_) return true;
        }
        return false;
    }

    void capture_known() {
        for (int i = 0; i < m_; ++i) {
            if (status_[i] != Status::known || clock_ >= pb_.expiry(i)) continue;
            for (int j = 0; j < n_; ++j) {
                if (!is_visit(pos_[j], pb_.target(i), tol_)) continue;
                const double r = pb_.collectible_reward(i, clock_);
                status_[i] = Status::visited;
                log_.total_reward += r;
                MissionEvent e{clock_, EventKind::target_visited, pb_.agent(j).id, pb_.target(i).id};
                e.reward = r;
                push(e);
                break;
            }
        }
    }

    // Instantaneous events at the current clock: visits, appearances and
    // detections, visits of newly known targets, then expiries.
    void settle() {
        capture_known();
        bool found = false;
        for (int i = 0; i < m_; ++i) {
            if (status_[i] == Status::pending && pb_.target(i).appears_at <= clock_) {
                status_[i] = Status::unseen;
            }
            if (status_[i] == Status::unseen && sees(i)) {
                status_[i] = Status::known;
                found = true;
                if (clock_ > 0.0 || pb_.target(i).appears_at > 0.0) {
                    push({clock_, EventKind::target_appeared, -1, pb_.target(i).id});
                }
            }
        }
        if (found) capture_known();
        for (int i = 0; i < m_; ++i) {
            const bool open = status_[i] == Status::known || status_[i] == Status::unseen;
            if (open && clock_ >= pb_.expiry(i)) {
                if (status_[i] == Status::known) {
                    push({clock_, EventKind::target_expired, -1, pb_.target(i).id});
                }
                status_[i] = Status::expired;
            }
        }
    }

    // Earliest event strictly inside the next `limit` time units when agents
    // move along `headings`.
    double next_event(const std::vector<double>& headings, double limit) const {
        double dt = limit;
        std::vector<Vec2> vel(n_);
        for (int j = 0; j < n_; ++j) vel[j] = pb_.agent(j).speed * unit(headings[j]);
        for (int i = 0; i < m_; ++i) {
            const Target& t = pb_.target(i);
            switch (status_[i]) {
                case Status::pending:
                    dt = std::min(dt, std::max(0.0, t.appears_at - clock_));
                    break;
                case Status::known:
                    for (int j = 0; j < n_; ++j) {
                        if (auto e = first_entry_time(pos_[j], vel[j], t.position, t.capture_radius,
                                                      dt, tol_)) {
                            dt = std::min(dt, *e);
                        }
                    }
                    dt = std::min(dt, pb_.expiry(i) - clock_);
                    break;
                case Status::unseen:
                    if (!full_info_) {
                        for (int j = 0; j < n_; ++j) {
                            const double r = *pb_.agent(j).sensing_range;
                            if (auto e = first_entry_time(pos_[j], vel[j], t.position, r, dt, 0.0)) {
                                dt = std::min(dt, *e);
                            }
                        }
                    }
                    dt = std::min(dt, pb_.expiry(i) - clock_);
                    break;
                default:
                    break;
            }
        }
        return std::max(dt, 0.0);
    }

    void move(const std::vector<double>& headings, double dt) {
        for (int j = 0; j < n_; ++j) {
            const Vec2 from = pos_[j];
            heading_[j] = headings[j];
            pos_[j] = advance(from, headings[j], pb_.agent(j).speed, dt);
            if (coverage_) coverage_->sweep(from, pos_[j]);
        }
        clock_ += dt;
        sample();
    }

    void plan_and_move(const std::vector<int>& live) {
        const MissionState state{clock_, pos_, live};
        const ControlDecision d = solve(pb_, state);
        ++log_.control_steps;
        log_.depth_truncated = log_.depth_truncated || d.depth_truncated;
        MissionEvent e{clock_, EventKind::control_evaluated};
        e.planning_horizon = d.planning_horizon;
        e.action_horizon = d.action_horizon;
        push(e);
        const double limit = std::min(d.action_horizon, pb_.spec().mission_time - clock_);
        const double dt = next_event(d.chosen_headings, limit);
        move(d.chosen_headings, dt);
        if (dt == d.action_horizon && d.action_horizon < d.planning_horizon) {
            push({clock_, EventKind::multiple_immediate_target});
        }
    }

    void explore() {
        std::vector<double> headings(n_);
        double limit = pb_.spec().mission_time - clock_;
        for (int j = 0; j < n_; ++j) {
            auto cell = coverage_->nearest_open(pos_[j]);
            if (!cell) {
                coverage_->reset();
                for (int q = 0; q < n_; ++q) coverage_->sweep(pos_[q], pos_[q]);
                cell = coverage_->nearest_open(pos_[j]);
            }
            if (!cell) {
                headings[j] = heading_[j];
                continue;
            }
            const Vec2 c = coverage_->center(*cell);
            headings[j] = heading_to(pos_[j], c);
            const double gap = distance(pos_[j], c) - coverage_->reach();
            limit = std::min(limit, std::max(gap, 0.0) / pb_.agent(j).speed);
        }
        move(headings, next_event(headings, limit));
    }

    void hold() {
        double dt = pb_.spec().mission_time - clock_;
        for (int i = 0; i < m_; ++i) {
            if (status_[i] == Status::pending) dt = std::min(dt, pb_.target(i).appears_at - clock_);
        }
        std::vector<Vec2> still = pos_;
        clock_ += std::max(dt, 0.0);
        pos_ = still;
        sample();
    }

    void return_to_base() {
        const Vec2 base = pb_.spec().base;
        for (int j = 0; j < n_; ++j) {
            const double d = distance(pos_[j], base);
            if (d == 0.0) continue;
            const double h = heading_to(pos_[j], base);
            log_.trajectories[j].push_back({clock_, pos_[j], h});
            log_.trajectories[j].push_back({clock_ + d / pb_.agent(j).speed, base, h});
        }
    }

    Problem pb_;
    int n_;
    int m_;
    double tol_;
    std::vector<Status> status_;
    std::vector<Vec2> pos_;
    std::vector<double> heading_;
    double clock_ = 0.0;
    bool full_info_ = false;
    double min_range_ = inf;
    std::optional<Coverage> coverage_;
    MissionLog log_;
};

}  // namespace

MissionLog run_mission(const MissionSpec& spec) { return Simulation(spec).run(); }

std::vector<int> sense_filter(const MissionSpec& spec, const MissionState& state, int agent) {
    const auto& range = spec.agents[agent].sensing_range;
    if (!range) return state.live_targets;
    std::vector<int> out;
    for (int i : state.live_targets) {
        if (distance(state.agent_positions[agent], spec.targets[i].position) <= *range) {
            out.push_back(i);
        }
    }
    return out;
}

double total_reward(const MissionLog& log) {
    double sum = 0.0;
    for (const auto& e : log.events) {
        if (e.kind == EventKind::target_visited) sum += e.reward;
    }
    return sum;
}

std::vector<Visit> visits(const MissionLog& log) {
    std::vector<Visit> out;
    for (const auto& e : log.events) {
        if (e.kind == EventKind::target_visited) out.push_back({e.target, e.agent, e.time, e.reward});
    }
    return out;
}

}  // namespace crh
