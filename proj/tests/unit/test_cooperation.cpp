#include <vector>

#include "doctest.h"

#include "crh/controller.hpp"
#include "crh/cooperation.hpp"
#include "support/instances.hpp"

using namespace crh;

TEST_CASE("neighbor_set orders agents by distance") {
    const std::vector<Vec2> agents{{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}};
    CHECK(neighbor_set({0.0, 0.0}, agents, 2) == std::vector<int>{0, 1});
    const std::vector<Vec2> reversed{{3.0, 0.0}, {2.0, 0.0}, {1.0, 0.0}};
    CHECK(neighbor_set({0.0, 0.0}, reversed, 2) == std::vector<int>{2, 1});
    const std::vector<Vec2> pair{{5.0, 0.0}, {0.0, 1.0}};
    CHECK(neighbor_set({0.0, 0.0}, pair, 2) == std::vector<int>{1, 0});
    const std::vector<Vec2> tied{{0.0, 2.0}, {2.0, 0.0}};
    CHECK(neighbor_set({0.0, 0.0}, tied, 2) == std::vector<int>{0, 1});
    CHECK(neighbor_set({0.0, 0.0}, tied, 5).size() == 2);
}

TEST_CASE("relative distance") {
    const std::vector<Vec2> agents{{1.0, 0.0}, {-3.0, 0.0}, {50.0, 0.0}};
    const std::vector<int> nb{0, 1};
    CHECK(relative_distance({0.0, 0.0}, agents, 0, nb) == doctest::Approx(0.25));
    CHECK(relative_distance({0.0, 0.0}, agents, 1, nb) == doctest::Approx(0.75));
    CHECK(relative_distance({0.0, 0.0}, agents, 2, nb) == 1.0);

    const std::vector<Vec2> sym{{2.0, 0.0}, {-2.0, 0.0}};
    const std::vector<int> both{0, 1};
    CHECK(relative_distance({0.0, 0.0}, sym, 0, both) == doctest::Approx(0.5));
}

TEST_CASE("proximity function") {
    CHECK(proximity(0.5, 0.0) == doctest::Approx(0.5));
    CHECK(proximity(0.5, 0.25) == doctest::Approx(0.5));
    CHECK(proximity(0.2, 0.25) == 1.0);
    CHECK(proximity(0.8, 0.25) == 0.0);
    for (double d = 0.0; d <= 1.0; d += 0.05) {
        const double p = proximity(d, 0.1);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("partition assigns every live target to one agent") {
    SUBCASE("single agent owns everything") {
        const MissionSpec s = crh::testing::layout({{0.0, 0.0}}, {{1.0, 1.0}, {5.0, 5.0}, {9.0, 2.0}});
        const auto part = partition_targets(s, initial_state(s));
        CHECK(part.owned_by(0) == std::vector<int>{0, 1, 2});
        CHECK(part.sizes == std::vector<int>{3});
    }
    SUBCASE("nearer agent wins") {
        const MissionSpec s = crh::testing::layout({{0.0, 0.0}, {10.0, 0.0}}, {{3.0, 0.0}, {8.0, 1.0}});
        const auto part = partition_targets(s, initial_state(s));
        CHECK(part.owner == std::vector<int>{0, 1});
    }
    SUBCASE("equidistant target goes to the lower id") {
        const MissionSpec s = crh::testing::layout({{0.0, 0.0}, {10.0, 0.0}}, {{5.0, 3.0}});
        CHECK(partition_targets(s, initial_state(s)).owner == std::vector<int>{0});
    }
    SUBCASE("dead targets are unowned") {
        const MissionSpec s = crh::testing::layout({{0.0, 0.0}}, {{1.0, 1.0}, {5.0, 5.0}});
        MissionState st = initial_state(s);
        st.live_targets = {1};
        CHECK(partition_targets(s, st).owner == std::vector<int>{-1, 0});
    }
    SUBCASE("random layouts") {
        for (int seed = 0; seed < 20; ++seed) {
            crh::testing::ScatterParams p;
            p.agents = 3;
            p.targets = 12;
            const MissionSpec s = crh::testing::scatter(300 + seed, p);
            const auto part = partition_targets(s, initial_state(s));
            int total = 0;
            for (int j = 0; j < 3; ++j) total += part.sizes[j];
            CHECK(total == 12);
            for (int i = 0; i < 12; ++i) {
                CHECK(part.owner[i] >= 0);
                CHECK(part.owner[i] < 3);
            }
        }
    }
}

TEST_CASE("proximity table rows follow live targets") {
    const MissionSpec s = crh::testing::layout({{0.0, 0.0}, {10.0, 0.0}}, {{1.0, 0.0}, {7.0, 0.0}});
    const auto tab = proximity_table(s, initial_state(s));
    REQUIRE(tab.targets == std::vector<int>{0, 1});
    CHECK(tab.direct(0, 0) == doctest::Approx(1.0));
    CHECK(tab.direct(1, 1) == doctest::Approx(3.0));
    CHECK(tab.relative(0, 0) == doctest::Approx(0.1));
    CHECK(tab.prox(0, 0) + tab.prox(0, 1) == doctest::Approx(1.0));
}
