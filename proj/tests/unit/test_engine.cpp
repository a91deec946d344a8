#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"

#include "crh/engine.hpp"
#include "crh/io.hpp"
#include "crh/oracle.hpp"
#include "support/instances.hpp"

using namespace crh;
using crh::testing::layout;

namespace {

bool has_event(const MissionLog& log, EventKind kind, double time, int target = -1) {
    return std::any_of(log.events.begin(), log.events.end(), [&](const MissionEvent& e) {
        return e.kind == kind && std::fabs(e.time - time) < 1e-9 && (target < 0 || e.target == target);
    });
}

double replay(const MissionSpec& s, const MissionLog& log) {
    double sum = 0.0;
    for (const auto& v : visits(log)) {
        for (const auto& t : s.targets) {
            if (t.id == v.target) sum += reward_at(t, v.time);
        }
    }
    return sum;
}

}  // namespace

TEST_CASE("single target is visited after the straight leg") {
    MissionSpec s = layout({{0.0, 0.0}}, {{3.0, 4.0}});
    s.targets[0].initial_reward = 10.0;
    s.targets[0].deadline = 300.0;
    const auto log = run_mission(s);
    const auto v = visits(log);
    REQUIRE(v.size() == 1);
    CHECK(v[0].time == doctest::Approx(5.0));
    CHECK(log.total_reward == doctest::Approx(reward_at(s.targets[0], 5.0)));
    CHECK(log.completion_time == doctest::Approx(5.0));
    CHECK(log.events.back().kind == EventKind::mission_complete);
}

TEST_CASE("two-target run realizes the analytic order") {
    int checked = 0;
    for (int seed = 0; seed < 100; ++seed) {
        crh::testing::ScatterParams p;
        p.targets = 2;
        const MissionSpec s = crh::testing::scatter(1300 + seed, p);
        const auto label = two_target_optimal(s);
        if (label.label == TwoTargetLabel::tie) continue;
        const auto v = visits(run_mission(s));
        REQUIRE(v.size() == 2);
        const int first = label.label == TwoTargetLabel::first_second ? s.targets[0].id : s.targets[1].id;
        CHECK(v[0].target == first);
        ++checked;
    }
    CHECK(checked > 90);
}

TEST_CASE("late target triggers a re-plan at its appearance") {
    MissionSpec s = layout({{0.0, 0.0}}, {{30.0, 0.0}, {0.0, 20.0}}, {{0.0, 0.0}, {50.0, 50.0}});
    s.targets[1].appears_at = 10.0;
    const auto log = run_mission(s);
    CHECK(has_event(log, EventKind::target_appeared, 10.0, s.targets[1].id));
    CHECK(has_event(log, EventKind::control_evaluated, 10.0));
    CHECK(visits(log).size() == 2);
}

TEST_CASE("a target that appears after its deadline is logged and expires") {
    MissionSpec s = layout({{0.0, 0.0}}, {{30.0, 0.0}, {0.0, 20.0}}, {{0.0, 0.0}, {50.0, 50.0}});
    s.targets[1].deadline = 5.0;
    s.targets[1].appears_at = 10.0;
    const auto log = run_mission(s);
    CHECK(has_event(log, EventKind::target_appeared, 10.0, s.targets[1].id));
    CHECK(has_event(log, EventKind::target_expired, 10.0, s.targets[1].id));
    CHECK(visits(log).size() == 1);
}

TEST_CASE("agents wait for pending targets") {
    MissionSpec s = layout({{0.0, 0.0}}, {{3.0, 4.0}, {0.0, 2.0}});
    s.targets[1].appears_at = 50.0;
    const auto log = run_mission(s);
    const auto v = visits(log);
    REQUIRE(v.size() == 2);
    CHECK(v[1].time > 50.0);
}

TEST_CASE("sense filter") {
    MissionSpec s = layout({{0.0, 0.0}}, {{61.0, 0.0}, {30.0, 0.0}}, {{0.0, 0.0}, {300.0, 300.0}});
    const MissionState st = initial_state(s);
    CHECK(sense_filter(s, st, 0) == std::vector<int>{0, 1});
    s.agents[0].sensing_range = 60.0;
    CHECK(sense_filter(s, st, 0) == std::vector<int>{1});
}

TEST_CASE("limited sensing discovers targets by exploring") {
    RandomMissionParams p;
    p.target_count = 12;
    p.agent_count = 2;
    p.seed = 77;
    p.sensing_range = 60.0;
    const MissionSpec s = gen_random(p);
    const auto log = run_mission(s);
    CHECK(visits(log).size() > 0);
    CHECK(std::any_of(log.events.begin(), log.events.end(),
                      [](const MissionEvent& e) { return e.kind == EventKind::target_appeared; }));
    CHECK(log.total_reward == doctest::Approx(replay(s, log)).epsilon(1e-12));
}

TEST_CASE("reward conservation and single visits") {
    for (int seed = 0; seed < 12; ++seed) {
        RandomMissionParams p;
        p.target_count = 8 + seed;
        p.agent_count = 1 + seed % 3;
        p.cluster_count = seed % 2 ? 4 : 0;
        p.appearance_fraction = seed % 3 == 0 ? 0.4 : 0.0;
        p.alpha = seed % 4 == 0 ? 0.5 : 1.0;
        p.capture_radius = seed % 5 == 0 ? 4.0 : 0.0;
        p.seed = 50 + seed;
        p.config.lookahead_depth = 1 + seed % 2;
        const MissionSpec s = gen_random(p);
        const auto log = run_mission(s);
        CHECK(std::fabs(log.total_reward - replay(s, log)) <= 1e-9);
        CHECK(total_reward(log) == doctest::Approx(log.total_reward));
        std::set<int> seen;
        for (const auto& v : visits(log)) CHECK(seen.insert(v.target).second);
    }
}

TEST_CASE("trajectories are continuous and respect speed") {
    RandomMissionParams p;
    p.target_count = 10;
    p.agent_count = 2;
    p.seed = 9;
    const MissionSpec s = gen_random(p);
    const auto log = run_mission(s);
    REQUIRE(log.trajectories.size() == 2);
    for (std::size_t j = 0; j < 2; ++j) {
        const auto& tr = log.trajectories[j];
        CHECK(tr.front().position == s.agents[j].position);
        for (std::size_t k = 1; k < tr.size(); ++k) {
            const double dt = tr[k].time - tr[k - 1].time;
            CHECK(dt >= 0.0);
            CHECK(distance(tr[k].position, tr[k - 1].position) <= s.agents[j].speed * dt + 1e-9);
        }
    }
}

TEST_CASE("runs are deterministic") {
    RandomMissionParams p;
    p.target_count = 15;
    p.cluster_count = 3;
    p.appearance_fraction = 0.3;
    p.seed = 4;
    p.config.lookahead_depth = 2;
    const MissionSpec s = gen_random(p);
    CHECK(run_mission(s) == run_mission(s));
}

TEST_CASE("return to base only extends trajectories") {
    MissionSpec s = layout({{1.0, 1.0}}, {{4.0, 5.0}, {8.0, 2.0}});
    const auto plain = run_mission(s);
    s.config.return_to_base = true;
    const auto back = run_mission(s);
    CHECK(back.events == plain.events);
    CHECK(back.total_reward == plain.total_reward);
    CHECK(back.trajectories[0].back().position == s.base);
    CHECK(back.trajectories[0].size() > plain.trajectories[0].size());
}

TEST_CASE("capture radius shortens the leg") {
    MissionSpec s = layout({{0.0, 0.0}}, {{10.0, 0.0}}, {{0.0, 0.0}, {20.0, 20.0}});
    s.targets[0].capture_radius = 2.0;
    const auto v = visits(run_mission(s));
    REQUIRE(v.size() == 1);
    CHECK(v[0].time == doctest::Approx(8.0));
}
