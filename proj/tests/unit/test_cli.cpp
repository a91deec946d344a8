#include <cstdlib>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

#include "crh/io.hpp"

using namespace crh;

namespace {

const std::string cli = CRH_CLI_PATH;
const std::string work = CRH_WORK_DIR;
const std::string fixture = std::string(CRH_DATA_DIR) + "/fixtures/two_target.json";

int run(const std::string& args) {
    const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json load(const std::string& path) { return nlohmann::json::parse(read_text_file(path)); }

}  // namespace

TEST_CASE("missing or malformed input exits with 2") {
    CHECK(run("run " + work + "/does_not_exist.json") == 2);
    CHECK(run("run") == 2);
    CHECK(run("run " + fixture + " --lookahead 0") == 2);
    write_text_file(work + "/bad_alpha.json",
                    R"({"space": {"min": [0, 0], "max": [9, 9]}, "mission_time": 10,
                        "targets": [{"id": 1, "position": [1, 1], "initial_reward": 1, "deadline": 5, "alpha": 1.5}],
                        "agents": [{"id": 1, "position": [0, 0]}]})");
    CHECK(run("run " + work + "/bad_alpha.json") == 2);
}

TEST_CASE("run reports the optimal two-target reward") {
    REQUIRE(run("run " + fixture + " --summary " + work + "/two_target_summary.json --out " + work +
                "/two_target.csv") == 0);
    const auto j = load(work + "/two_target_summary.json");
    // Visiting (40,10) then (10,60) from (10,10) with linear decay.
    CHECK(j["total_reward"].get<double>() == doctest::Approx(23.1126987367698).epsilon(1e-12));
    CHECK(j["visits"][0]["target"] == 1);
    CHECK(read_text_file(work + "/two_target.csv").rfind("time,agent,x,y,heading,event\n", 0) == 0);
}

TEST_CASE("controller flags are echoed in the summary") {
    REQUIRE(run("run " + fixture + " --lookahead 3 --gamma 0.3 --sparsity-neighbors 5 --summary " + work +
                "/k3.json") == 0);
    const auto j = load(work + "/k3.json");
    CHECK(j["config"]["lookahead_depth"] == 3);
    CHECK(j["config"]["sparsity_gamma"].get<double>() == doctest::Approx(0.3));
    CHECK(j["config"]["sparsity_neighbors"] == 5);
}

TEST_CASE("gen and batch are reproducible") {
    REQUIRE(run("gen --targets 9 --seed 11 --clusters 3 --out " + work + "/g1.json") == 0);
    REQUIRE(run("gen --targets 9 --seed 11 --clusters 3 --out " + work + "/g2.json") == 0);
    CHECK(read_text_file(work + "/g1.json") == read_text_file(work + "/g2.json"));
    CHECK(load(work + "/g1.json")["targets"].size() == 9);

    const std::string batch = "batch --missions 3 --targets 8 --seed 5 --variant K=1 --variant K=2,gamma=0.3,I=5 --summary ";
    REQUIRE(run(batch + work + "/b1.json") == 0);
    REQUIRE(run(batch + work + "/b2.json") == 0);
    CHECK(read_text_file(work + "/b1.json") == read_text_file(work + "/b2.json"));
    CHECK(run("batch --missions 2 --variant K=x") == 2);
}

TEST_CASE("oracle and bench-tsp subcommands") {
    CHECK(run("oracle " + fixture + " --max-k 2") == 0);
    REQUIRE(run("bench-tsp " + std::string(CRH_DATA_DIR) + "/tsplib/berlin52.tsp --optima-table " +
                std::string(CRH_DATA_DIR) + "/tsplib_optima.json --summary " + work + "/berlin.json") == 0);
    const auto j = load(work + "/berlin.json");
    CHECK(j["tsp"]["optimum"] == 7542);
    CHECK(j["tsp"]["complete"] == true);
    CHECK(j["tsp"]["order"].size() == 52);
}
