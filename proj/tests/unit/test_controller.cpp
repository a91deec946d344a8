#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "crh/controller.hpp"
#include "crh/errors.hpp"
#include "crh/oracle.hpp"
#include "support/instances.hpp"

using namespace crh;
using crh::testing::layout;

namespace {

MissionSpec six_target_ring() {
    return layout({{5.0, 4.0}},
                  {{5.0, 2.5}, {6.0, 5.0}, {7.0, 3.0}, {3.0, 4.0}, {6.0, 4.0}, {3.0, 3.0}});
}

}  // namespace

TEST_CASE("planning horizon is the nearest agent-target travel time") {
    const MissionSpec one = layout({{0.0, 0.0}}, {{3.0, 4.0}, {6.0, 8.0}}, {{0.0, 0.0}, {10.0, 10.0}});
    CHECK(planning_horizon(Problem(one), initial_state(one)) == doctest::Approx(5.0));

    const MissionSpec two = layout({{0.0, 0.0}, {10.0, 0.0}}, {{6.0, 0.0}});
    CHECK(planning_horizon(Problem(two), initial_state(two)) == doctest::Approx(4.0));

    MissionSpec cap = layout({{0.0, 0.0}}, {{1.0, 0.0}});
    cap.targets[0].capture_radius = 2.0;
    CHECK(planning_horizon(Problem(cap), initial_state(cap)) == 0.0);

    MissionState done = initial_state(one);
    done.live_targets.clear();
    CHECK_THROWS_AS(planning_horizon(Problem(one), done), Error);
}

TEST_CASE("closest point lies on the ray toward the target") {
    auto a = closest_point({0.0, 0.0}, {2.0, 0.0}, 1.0);
    CHECK(a.point.x == doctest::Approx(1.0));
    CHECK(a.point.y == doctest::Approx(0.0));
    auto b = closest_point({5.0, 4.0}, {5.0, 2.5}, 1.0);
    CHECK(b.point.x == doctest::Approx(5.0));
    CHECK(b.point.y == doctest::Approx(3.0));
    auto c = closest_point({0.0, 0.0}, {3.0, 4.0}, 2.0);
    CHECK(c.point.x == doctest::Approx(1.2));
    CHECK(c.point.y == doctest::Approx(1.6));
    CHECK_FALSE(c.degenerate);
    CHECK(closest_point({1.0, 1.0}, {1.0, 1.0}, 2.0).degenerate);
}

TEST_CASE("sparsity factor") {
    MissionSpec s = layout({{5.0, 5.0}}, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 2.0}});
    for (auto& t : s.targets) t.deadline = 1.0;
    CHECK(sparsity_factor(Problem(s), 0, std::vector<int>{0, 1, 2}) == 0.0);
    s.config.sparsity_gamma = 0.5;
    s.config.sparsity_neighbors = 2;
    const Problem pb(s);
    CHECK(sparsity_factor(pb, 0, std::vector<int>{0, 1, 2}) == doctest::Approx(1.0));
    CHECK(sparsity_factor(pb, 0, std::vector<int>{0}) == 0.0);
    const auto table = sparsity_table(pb, std::vector<int>{0, 2});
    CHECK(table[1] == 0.0);
    CHECK(table[0] == doctest::Approx(0.5 * 2.0));
}

TEST_CASE("travel cost") {
    MissionSpec s = layout({{0.0, 0.0}}, {{5.0, 0.0}, {9.0, 9.0}});
    s.targets[0].initial_reward = 10.0;
    s.targets[0].deadline = 300.0;
    const Problem pb(s);
    CHECK(travel_cost(pb, {0.0, 0.0}, 0, std::vector<int>{0}) == doctest::Approx(150.0));
    CHECK(travel_cost(pb, {5.0, 0.0}, 0, std::vector<int>{0}) == 0.0);

    const MissionSpec eq = layout({{0.0, 0.0}}, {{1.0, 0.0}, {0.0, 3.0}});
    const Problem pe(eq);
    const std::vector<int> live{0, 1};
    CHECK(travel_cost(pe, {0.0, 0.0}, 0, live) < travel_cost(pe, {0.0, 0.0}, 1, live));
}

TEST_CASE("six-target ring active sets") {
    const MissionSpec s = six_target_ring();
    const Problem pb(s);
    const MissionState st = initial_state(s);
    const auto zeta = sparsity_table(pb, st.live_targets);
    CHECK(closest_point_test_set(pb, {5.0, 4.0}, 1.0, st.live_targets, zeta) ==
          std::vector<int>{0, 1, 3, 4});
    const auto res = active_targets(pb, st, 0, 1.0);
    CHECK(res.active_targets == std::vector<int>{0, 1, 3, 4, 5});
    CHECK(res.active_targets == active_set_bruteforce(s, st, 0, 1.0, 10'000));
    CHECK(res.closest_points.at(0).y == doctest::Approx(3.0));
}

TEST_CASE("active set special cases") {
    SUBCASE("single target heads straight at it") {
        const MissionSpec s = layout({{0.0, 0.0}}, {{3.0, 4.0}});
        const auto res = active_targets(Problem(s), initial_state(s), 0, 2.0);
        CHECK(res.active_targets == std::vector<int>{0});
        CHECK(res.candidate_headings.at(0) == doctest::Approx(std::atan2(4.0, 3.0)));
    }
    SUBCASE("identical targets on opposite sides are both active") {
        const MissionSpec s = layout({{5.0, 5.0}}, {{2.0, 5.0}, {8.0, 5.0}});
        const auto res = active_targets(Problem(s), initial_state(s), 0, 3.0);
        CHECK(res.active_targets == std::vector<int>{0, 1});
        CHECK(active_set_bruteforce(s, initial_state(s), 0, 3.0, 1000) == std::vector<int>{0, 1});
    }
    SUBCASE("random layouts agree with the brute-force definition") {
        for (int seed = 0; seed < 30; ++seed) {
            crh::testing::ScatterParams p;
            p.targets = 4 + seed % 10;
            p.gamma = seed % 2 ? 0.3 : 0.0;
            const MissionSpec s = crh::testing::scatter(600 + seed, p);
            const Problem pb(s);
            const MissionState st = initial_state(s);
            const double h = planning_horizon(pb, st);
            CHECK(active_targets(pb, st, 0, h).active_targets ==
                  active_set_bruteforce(s, st, 0, h, 10'000));
        }
    }
}

TEST_CASE("tour projection") {
    MissionSpec s = layout({{0.0, 0.0}}, {{3.0, 0.0}, {0.0, 1.0}, {0.0, 2.0}}, {{0.0, 0.0}, {10.0, 10.0}});
    const Problem pb(s);
    SUBCASE("single leg") {
        const std::vector<int> one{0};
        const auto tour = project_tour(pb, 0, {0.0, 0.0}, 10.0, one, one);
        CHECK(tour.order == std::vector<int>{0});
        CHECK(tour.visit_times[0] == doctest::Approx(13.0));
    }
    SUBCASE("nearer first with cumulative times") {
        const std::vector<int> two{1, 2};
        const auto tour = project_tour(pb, 0, {0.0, 0.0}, 0.0, two, two);
        CHECK(tour.order == std::vector<int>{1, 2});
        CHECK(tour.visit_times[0] == doctest::Approx(1.0));
        CHECK(tour.visit_times[1] == doctest::Approx(2.0));
    }
    SUBCASE("higher rate wins at equal distance") {
        MissionSpec r = layout({{0.0, 0.0}}, {{2.0, 0.0}, {-2.0, 0.0}}, {{-5.0, -5.0}, {5.0, 5.0}});
        r.targets[0].initial_reward = 1.0;
        r.targets[1].initial_reward = 50.0;
        const Problem pr(r);
        const std::vector<int> both{0, 1};
        CHECK(project_tour(pr, 0, {0.0, 0.0}, 0.0, both, both).order.front() == 1);
    }
    SUBCASE("commitment goes first") {
        const std::vector<int> all{0, 1, 2};
        CHECK(project_tour(pb, 0, {0.0, 0.0}, 0.0, all, all, 0).order.front() == 0);
    }
}

TEST_CASE("immediate reward and reward-to-go") {
    MissionSpec s = layout({{0.0, 0.0}}, {{4.0, 0.0}, {0.0, 9.0}}, {{0.0, 0.0}, {10.0, 10.0}});
    s.targets[0].initial_reward = 10.0;
    s.targets[0].deadline = 300.0;
    s.targets[1].initial_reward = 6.0;
    s.targets[1].deadline = 300.0;
    const Problem pb(s);
    const MissionState st = initial_state(s);
    const double h = planning_horizon(pb, st);
    REQUIRE(h == doctest::Approx(4.0));

    const std::vector<double> east{0.0};
    CHECK(immediate_reward(pb, st, east, h) == doctest::Approx(reward_at(s.targets[0], 4.0)));
    const double rest = 4.0 + std::hypot(4.0, 9.0);
    CHECK(reward_to_go(pb, st, east, h) == doctest::Approx(reward_at(s.targets[1], rest)));

    const std::vector<double> west{std::numbers::pi};
    CHECK(immediate_reward(pb, st, west, h) == 0.0);

    const std::vector<int> order12{0, 1};
    CHECK(objective(pb, st, east, h) == doctest::Approx(order_reward(s, order12)));
}

TEST_CASE("two-target objective matches the closed-form order rewards") {
    for (int seed = 0; seed < 50; ++seed) {
        crh::testing::ScatterParams p;
        p.targets = 2;
        const MissionSpec s = crh::testing::scatter(700 + seed, p);
        const Problem pb(s);
        const MissionState st = initial_state(s);
        const double h = planning_horizon(pb, st);
        const int near = distance(s.agents[0].position, s.targets[0].position) <=
                                 distance(s.agents[0].position, s.targets[1].position)
                             ? 0
                             : 1;
        const std::vector<double> head{heading_to(s.agents[0].position, s.targets[near].position)};
        const std::vector<int> order{near, 1 - near};
        CHECK(objective(pb, st, head, h) == doctest::Approx(order_reward(s, order)).epsilon(1e-12));
    }
}

TEST_CASE("two agents landing on distinct targets add up") {
    MissionSpec s = layout({{0.0, 0.0}, {10.0, 0.0}}, {{0.0, 2.0}, {10.0, 2.0}});
    const Problem pb(s);
    const MissionState st = initial_state(s);
    const std::vector<double> up{std::numbers::pi / 2, std::numbers::pi / 2};
    CHECK(immediate_reward(pb, st, up, 2.0) ==
          doctest::Approx(reward_at(s.targets[0], 2.0) + reward_at(s.targets[1], 2.0)));
}

TEST_CASE("visit time lower bound never exceeds the projected tour") {
    for (int seed = 0; seed < 20; ++seed) {
        crh::testing::ScatterParams p;
        p.targets = 6;
        const MissionSpec s = crh::testing::scatter(800 + seed, p);
        const Problem pb(s);
        const MissionState st = initial_state(s);
        const double h = planning_horizon(pb, st);
        const std::vector<double> head{0.37 * seed};
        const auto lb = visit_time_lower_bound(pb, st, head, h);
        const auto end = endpoints_for(pb, st, head, h);
        const auto tour = project_tour(pb, 0, end[0], h, st.live_targets, st.live_targets);
        for (std::size_t k = 0; k < tour.order.size(); ++k) {
            CHECK(lb.at({tour.order[k], 0}) <= tour.visit_times[k] + 1e-9);
        }
    }
    const MissionSpec s = layout({{0.0, 0.0}}, {{3.0, 0.0}, {0.0, 4.0}});
    const auto lb = visit_time_lower_bound(Problem(s), initial_state(s), std::vector<double>{0.0}, 3.0);
    CHECK(lb.at({0, 0}) == doctest::Approx(3.0));
    CHECK(lb.at({1, 0}) == doctest::Approx(8.0));
}

TEST_CASE("action horizon stops at the first equidistance crossing") {
    const MissionSpec s = layout({{0.0, 0.0}}, {{4.0, 0.0}, {0.0, 3.0}}, {{-1.0, -1.0}, {10.0, 10.0}});
    const Problem pb(s);
    const MissionState st = initial_state(s);
    CHECK(action_horizon(pb, st, std::vector<double>{0.0}, 3.0) == doctest::Approx(7.0 / 8.0));

    const MissionSpec far = layout({{0.0, 0.0}}, {{4.0, 0.0}, {-9.0, 0.0}}, {{-10.0, -1.0}, {10.0, 10.0}});
    CHECK(action_horizon(Problem(far), initial_state(far), std::vector<double>{0.0}, 3.0) ==
          doctest::Approx(3.0));

    const MissionSpec bis = layout({{0.0, 0.0}}, {{-2.0, 1.0}, {2.0, 1.0}}, {{-5.0, -5.0}, {5.0, 5.0}});
    CHECK(action_horizon(Problem(bis), initial_state(bis), std::vector<double>{std::numbers::pi / 2},
                         1.0) == doctest::Approx(1.0));
}

TEST_CASE("plan_step offers one candidate per active target") {
    const MissionSpec s = six_target_ring();
    const Problem pb(s);
    const auto plan = plan_step(pb, initial_state(s));
    CHECK(plan.horizon == doctest::Approx(1.0));
    REQUIRE(plan.candidates.size() == 1);
    std::vector<int> targets;
    for (const auto& c : plan.candidates[0]) targets.push_back(c.target);
    CHECK(std::is_sorted(targets.begin(), targets.end()));
    for (int l : {0, 1, 3, 4, 5}) CHECK(std::find(targets.begin(), targets.end(), l) != targets.end());
}
