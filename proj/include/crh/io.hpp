#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crh/engine.hpp"
#include "crh/mission.hpp"

namespace crh {

MissionSpec parse_mission(std::string_view text);
std::string write_mission(const MissionSpec& spec);

enum class TsplibMetric { euc_2d, att };

struct TsplibNode {
    int id = 0;
    Vec2 position;
};

struct TsplibInstance {
    std::string name;
    TsplibMetric metric = TsplibMetric::euc_2d;
    std::vector<TsplibNode> nodes;  // ascending id
};

TsplibInstance parse_tsplib_instance(std::string_view text);

// Integer edge length under the instance's metric (nint for EUC_2D,
// pseudo-Euclidean for ATT). Arguments are node indices.
long long tsplib_distance(const TsplibInstance& inst, int a, int b);

// Closed tour over node indices.
long long tour_length(const TsplibInstance& inst, std::span<const int> order);

// Closed nearest-neighbour tour from the first node, plain Euclidean.
double nearest_neighbor_tour_length(const TsplibInstance& inst);

struct RewardPolicy {
    double deadline_factor = 10.0;  // shared D = factor x nearest-neighbour tour
    std::optional<double> deadline;  // overrides the factor when set
};

MissionSpec tsplib_mission(const TsplibInstance& inst, const RewardPolicy& policy = {});
MissionSpec parse_tsplib(std::string_view text, const RewardPolicy& policy = {});

// SplitMix64 (Steele, Lea, Flood 2014). Doubles take the top 53 bits;
// normals use the cosine branch of Box-Muller.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
    std::uint64_t state_;
};

struct RandomMissionParams {
    int target_count = 20;
    int agent_count = 2;
    Box space{{0.0, 0.0}, {300.0, 300.0}};
    int cluster_count = 0;
    double reward_low = 10.0;
    double reward_high = 20.0;
    double deadline_low = 300.0;
    double deadline_high = 600.0;
    double appearance_fraction = 0.0;
    std::uint64_t seed = 1;
    double mission_time = 1000.0;
    double speed = 1.0;
    double capture_radius = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    std::optional<double> sensing_range;
    ControllerConfig config;
};

MissionSpec gen_random(const RandomMissionParams& params);

std::string write_trajectory(const MissionLog& log);

struct TspReport {
    std::string name;
    long long tour_length = 0;
    std::optional<long long> optimum;
    std::vector<int> order;  // node ids in visit order
    bool complete = true;
};

TspReport tsp_report(const TsplibInstance& inst, const MissionLog& log);

std::string write_summary(const MissionLog& log, const MissionSpec& spec,
                          const std::optional<TspReport>& tsp = std::nullopt);

// Instance name -> best known tour length.
std::map<std::string, long long> parse_optima_table(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace crh
