#include "crh/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "crh/errors.hpp"

namespace crh {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + key, "missing field");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path, "expected a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
    return v.get<int>();
}

bool boolean(const json& v, const std::string& path) {
    if (!v.is_boolean()) throw ParseError(path, "expected true or false");
    return v.get<bool>();
}

Vec2 point(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) throw ParseError(path, "expected [x, y]");
    return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path.empty() ? "document" : path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw ParseError(path + it.key(), "unknown field");
    }
}

template <typename F>
void optional_field(const json& obj, const char* key, F&& apply) {
    auto it = obj.find(key);
    if (it != obj.end()) apply(*it);
}

Target parse_target(const json& j, const std::string& p) {
    only_keys(j, {"id", "position", "initial_reward", "alpha", "beta", "deadline", "capture_radius",
                  "appears_at"},
              p);
    Target t;
    t.id = integer(field(j, "id", p), p + "id");
    t.position = point(field(j, "position", p), p + "position");
    t.initial_reward = number(field(j, "initial_reward", p), p + "initial_reward");
    t.deadline = number(field(j, "deadline", p), p + "deadline");
    optional_field(j, "alpha", [&](const json& v) { t.alpha = number(v, p + "alpha"); });
    optional_field(j, "beta", [&](const json& v) { t.beta = number(v, p + "beta"); });
    optional_field(j, "capture_radius",
                   [&](const json& v) { t.capture_radius = number(v, p + "capture_radius"); });
    optional_field(j, "appears_at", [&](const json& v) { t.appears_at = number(v, p + "appears_at"); });
    return t;
}

Agent parse_agent(const json& j, const std::string& p) {
    only_keys(j, {"id", "position", "speed", "heading", "sensing_range"}, p);
    Agent a;
    a.id = integer(field(j, "id", p), p + "id");
    a.position = point(field(j, "position", p), p + "position");
    optional_field(j, "speed", [&](const json& v) { a.speed = number(v, p + "speed"); });
    optional_field(j, "heading", [&](const json& v) { a.heading = number(v, p + "heading"); });
    optional_field(j, "sensing_range", [&](const json& v) {
        if (!v.is_null()) a.sensing_range = number(v, p + "sensing_range");
    });
    return a;
}

ControllerConfig parse_control(const json& j) {
    const std::string p = "control.";
    only_keys(j,
              {"lookahead_depth", "sparsity_gamma", "sparsity_neighbors", "cooperation_delta",
               "neighbor_count", "reward_epsilon", "tie_tolerance", "node_budget", "return_to_base"},
              p);
    ControllerConfig c;
    optional_field(j, "lookahead_depth",
                   [&](const json& v) { c.lookahead_depth = integer(v, p + "lookahead_depth"); });
    optional_field(j, "sparsity_gamma",
                   [&](const json& v) { c.sparsity_gamma = number(v, p + "sparsity_gamma"); });
    optional_field(j, "sparsity_neighbors", [&](const json& v) {
        c.sparsity_neighbors = integer(v, p + "sparsity_neighbors");
    });
    optional_field(j, "cooperation_delta",
                   [&](const json& v) { c.cooperation_delta = number(v, p + "cooperation_delta"); });
    optional_field(j, "neighbor_count",
                   [&](const json& v) { c.neighbor_count = integer(v, p + "neighbor_count"); });
    optional_field(j, "reward_epsilon",
                   [&](const json& v) { c.reward_epsilon = number(v, p + "reward_epsilon"); });
    optional_field(j, "tie_tolerance",
                   [&](const json& v) { c.tie_tolerance = number(v, p + "tie_tolerance"); });
    optional_field(j, "node_budget", [&](const json& v) {
        const int n = integer(v, p + "node_budget");
        if (n < 1) throw ParseError(p + "node_budget", "must be at least 1");
        c.node_budget = static_cast<std::size_t>(n);
    });
    optional_field(j, "return_to_base",
                   [&](const json& v) { c.return_to_base = boolean(v, p + "return_to_base"); });
    return c;
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

MissionSpec parse_mission(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed document: ") + e.what());
    }
    only_keys(doc, {"space", "base", "mission_time", "targets", "agents", "control"}, "");
    MissionSpec spec;
    const json& space = field(doc, "space", "");
    only_keys(space, {"min", "max"}, "space.");
    spec.space.min = point(field(space, "min", "space."), "space.min");
    spec.space.max = point(field(space, "max", "space."), "space.max");
    spec.base = spec.space.center();
    optional_field(doc, "base", [&](const json& v) { spec.base = point(v, "base"); });
    spec.mission_time = number(field(doc, "mission_time", ""), "mission_time");
    const json& targets = field(doc, "targets", "");
    if (!targets.is_array()) throw ParseError("targets", "expected a list");
    for (std::size_t k = 0; k < targets.size(); ++k) {
        spec.targets.push_back(parse_target(targets[k], "targets[" + std::to_string(k) + "]."));
    }
    const json& agents = field(doc, "agents", "");
    if (!agents.is_array()) throw ParseError("agents", "expected a list");
    for (std::size_t k = 0; k < agents.size(); ++k) {
        spec.agents.push_back(parse_agent(agents[k], "agents[" + std::to_string(k) + "]."));
    }
    optional_field(doc, "control", [&](const json& v) { spec.config = parse_control(v); });
    validate(spec);
    return spec;
}

std::string write_mission(const MissionSpec& spec) {
    ordered_json doc;
    doc["space"] = {{"min", point_json(spec.space.min)}, {"max", point_json(spec.space.max)}};
    doc["base"] = point_json(spec.base);
    doc["mission_time"] = spec.mission_time;
    doc["targets"] = ordered_json::array();
    for (const Target& t : spec.targets) {
        ordered_json j;
        j["id"] = t.id;
        j["position"] = point_json(t.position);
        j["initial_reward"] = t.initial_reward;
        j["alpha"] = t.alpha;
        j["beta"] = t.beta;
        j["deadline"] = t.deadline;
        j["capture_radius"] = t.capture_radius;
        j["appears_at"] = t.appears_at;
        doc["targets"].push_back(j);
    }
    doc["agents"] = ordered_json::array();
    for (const Agent& a : spec.agents) {
        ordered_json j;
        j["id"] = a.id;
        j["position"] = point_json(a.position);
        j["speed"] = a.speed;
        j["heading"] = a.heading;
        if (a.sensing_range) j["sensing_range"] = *a.sensing_range;
        doc["agents"].push_back(j);
    }
    const ControllerConfig& c = spec.config;
    doc["control"] = {{"lookahead_depth", c.lookahead_depth},
                      {"sparsity_gamma", c.sparsity_gamma},
                      {"sparsity_neighbors", c.sparsity_neighbors},
                      {"cooperation_delta", c.cooperation_delta},
                      {"neighbor_count", c.neighbor_count},
                      {"reward_epsilon", c.reward_epsilon},
                      {"tie_tolerance", c.tie_tolerance},
                      {"node_budget", c.node_budget},
                      {"return_to_base", c.return_to_base}};
    return doc.dump(2) + "\n";
}

TsplibInstance parse_tsplib_instance(std::string_view text) {
    TsplibInstance inst;
    std::istringstream in{std::string(text)};
    std::string line;
    std::string metric;
    int dimension = -1;
    bool coords = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t == "EOF") break;
        if (coords) {
            std::istringstream row(t);
            TsplibNode n;
            if (!(row >> n.id >> n.position.x >> n.position.y)) {
                if (std::isalpha(static_cast<unsigned char>(t[0]))) {
                    coords = false;
                } else {
                    throw ParseError("NODE_COORD_SECTION", "bad coordinate line " + std::to_string(line_no));
                }
            } else {
                inst.nodes.push_back(n);
                continue;
            }
        }
        if (t.rfind("NODE_COORD_SECTION", 0) == 0) {
            coords = true;
            continue;
        }
        const auto colon = t.find(':');
        if (colon == std::string::npos) continue;
        const std::string key = trim(std::string_view(t).substr(0, colon));
        const std::string value = trim(std::string_view(t).substr(colon + 1));
        if (key == "NAME") inst.name = value;
        if (key == "DIMENSION") dimension = std::stoi(value);
        if (key == "EDGE_WEIGHT_TYPE") metric = value;
    }
    if (metric == "EUC_2D") {
        inst.metric = TsplibMetric::euc_2d;
    } else if (metric == "ATT") {
        inst.metric = TsplibMetric::att;
    } else {
        throw ParseError("EDGE_WEIGHT_TYPE",
                         "unsupported edge weight type '" + metric + "' (EUC_2D and ATT only)");
    }
    if (inst.nodes.empty()) throw ParseError("NODE_COORD_SECTION", "no nodes");
    if (dimension >= 0 && dimension != static_cast<int>(inst.nodes.size())) {
        throw ParseError("DIMENSION", "does not match the number of nodes");
    }
    std::sort(inst.nodes.begin(), inst.nodes.end(),
              [](const TsplibNode& a, const TsplibNode& b) { return a.id < b.id; });
    for (std::size_t k = 1; k < inst.nodes.size(); ++k) {
        if (inst.nodes[k].id == inst.nodes[k - 1].id) throw ParseError("NODE_COORD_SECTION", "duplicate node id");
    }
    return inst;
}

long long tsplib_distance(const TsplibInstance& inst, int a, int b) {
    const Vec2 p = inst.nodes[a].position;
    const Vec2 q = inst.nodes[b].position;
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    if (inst.metric == TsplibMetric::att) {
        const double r = std::sqrt((dx * dx + dy * dy) / 10.0);
        const auto t = static_cast<long long>(std::lround(r));
        return static_cast<double>(t) < r ? t + 1 : t;
    }
    return static_cast<long long>(std::floor(std::sqrt(dx * dx + dy * dy) + 0.5));
}

long long tour_length(const TsplibInstance& inst, std::span<const int> order) {
    long long sum = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        sum += tsplib_distance(inst, order[k], order[(k + 1) % order.size()]);
    }
    return sum;
}

double nearest_neighbor_tour_length(const TsplibInstance& inst) {
    const std::size_t n = inst.nodes.size();
    std::vector<bool> used(n, false);
    std::size_t cur = 0;
    used[0] = true;
    double len = 0.0;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t best = n;
        double bd = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (used[k]) continue;
            const double d = distance(inst.nodes[cur].position, inst.nodes[k].position);
            if (best == n || d < bd) {
                best = k;
                bd = d;
            }
        }
        used[best] = true;
        len += bd;
        cur = best;
    }
    return len + distance(inst.nodes[cur].position, inst.nodes[0].position);
}

MissionSpec tsplib_mission(const TsplibInstance& inst, const RewardPolicy& policy) {
    MissionSpec spec;
    Box box{inst.nodes[0].position, inst.nodes[0].position};
    for (const auto& n : inst.nodes) {
        box.min.x = std::min(box.min.x, n.position.x);
        box.min.y = std::min(box.min.y, n.position.y);
        box.max.x = std::max(box.max.x, n.position.x);
        box.max.y = std::max(box.max.y, n.position.y);
    }
    double deadline = policy.deadline.value_or(policy.deadline_factor * nearest_neighbor_tour_length(inst));
    if (!(deadline > 0.0)) deadline = 1.0;
    spec.space = box;
    spec.base = inst.nodes[0].position;
    spec.mission_time = deadline;
    for (const auto& n : inst.nodes) {
        Target t;
        t.id = n.id;
        t.position = n.position;
        t.initial_reward = 1.0;
        t.alpha = 1.0;
        t.deadline = deadline;
        spec.targets.push_back(t);
    }
    Agent a;
    a.id = 1;
    a.position = inst.nodes[0].position;
    spec.agents.push_back(a);
    return spec;
}

MissionSpec parse_tsplib(std::string_view text, const RewardPolicy& policy) {
    return tsplib_mission(parse_tsplib_instance(text), policy);
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

MissionSpec gen_random(const RandomMissionParams& params) {
    SplitMix64 rng(params.seed);
    MissionSpec spec;
    spec.space = params.space;
    spec.base = params.space.center();
    spec.mission_time = params.mission_time;
    spec.config = params.config;
    const Box& box = params.space;
    std::vector<Vec2> centers;
    for (int c = 0; c < params.cluster_count; ++c) {
        const double x = rng.uniform(box.min.x, box.max.x);
        const double y = rng.uniform(box.min.y, box.max.y);
        centers.push_back({x, y});
    }
    const double extent = std::max(box.width(), box.height());
    const double spread =
        params.cluster_count > 0 ? extent / (4.0 * std::sqrt(static_cast<double>(params.cluster_count))) : 0.0;
    for (int i = 0; i < params.target_count; ++i) {
        Target t;
        t.id = i + 1;
        if (centers.empty()) {
            const double x = rng.uniform(box.min.x, box.max.x);
            const double y = rng.uniform(box.min.y, box.max.y);
            t.position = {x, y};
        } else {
            const Vec2 c = centers[i % centers.size()];
            const double x = c.x + spread * rng.normal();
            const double y = c.y + spread * rng.normal();
            t.position = {std::clamp(x, box.min.x, box.max.x), std::clamp(y, box.min.y, box.max.y)};
        }
        t.initial_reward = rng.uniform(params.reward_low, params.reward_high);
        t.deadline = rng.uniform(params.deadline_low, params.deadline_high);
        t.alpha = params.alpha;
        t.beta = params.beta;
        t.capture_radius = params.capture_radius;
        spec.targets.push_back(t);
    }
    const auto late = static_cast<int>(std::llround(params.appearance_fraction * params.target_count));
    std::vector<int> idx(params.target_count);
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = params.target_count - 1; k > 0; --k) {
        std::swap(idx[k], idx[rng.below(static_cast<std::uint64_t>(k) + 1)]);
    }
    std::vector<int> chosen(idx.begin(), idx.begin() + std::clamp(late, 0, params.target_count));
    std::sort(chosen.begin(), chosen.end());
    for (int i : chosen) spec.targets[i].appears_at = 0.5 * params.mission_time * (1.0 - rng.uniform());
    for (int j = 0; j < params.agent_count; ++j) {
        Agent a;
        a.id = j + 1;
        a.position = spec.base;
        a.speed = params.speed;
        a.sensing_range = params.sensing_range;
        spec.agents.push_back(a);
    }
    return spec;
}

std::string write_trajectory(const MissionLog& log) {
    struct Row {
        double time;
        std::string text;
    };
    std::vector<Row> rows;
    for (std::size_t j = 0; j < log.trajectories.size(); ++j) {
        for (const auto& s : log.trajectories[j]) {
            rows.push_back({s.time, fixed6(s.time) + "," + std::to_string(j + 1) + "," +
                                        fixed6(s.position.x) + "," + fixed6(s.position.y) + "," +
                                        fixed6(s.heading) + ","});
        }
    }
    for (const auto& e : log.events) {
        std::string name(to_string(e.kind));
        if (e.target >= 0) name += ":" + std::to_string(e.target);
        const std::string agent = e.agent >= 0 ? std::to_string(e.agent) : "";
        rows.push_back({e.time, fixed6(e.time) + "," + agent + ",,,," + csv_field(name)});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.time < b.time; });
    std::string out = "time,agent,x,y,heading,event\n";
    for (const auto& r : rows) out += r.text + "\n";
    return out;
}

TspReport tsp_report(const TsplibInstance& inst, const MissionLog& log) {
    TspReport rep;
    rep.name = inst.name;
    std::vector<int> idx;
    for (const auto& v : visits(log)) {
        rep.order.push_back(v.target);
        const auto it = std::lower_bound(inst.nodes.begin(), inst.nodes.end(), v.target,
                                         [](const TsplibNode& n, int id) { return n.id < id; });
        idx.push_back(static_cast<int>(it - inst.nodes.begin()));
    }
    // The agent starts on the first node, so a tour that never visits it
    // still departs from and returns to it.
    if (!idx.empty() && idx.front() != 0 && std::find(idx.begin(), idx.end(), 0) == idx.end()) {
        idx.insert(idx.begin(), 0);
    }
    rep.tour_length = tour_length(inst, idx);
    rep.complete = rep.order.size() == inst.nodes.size();
    return rep;
}

std::string write_summary(const MissionLog& log, const MissionSpec& spec,
                          const std::optional<TspReport>& tsp) {
    ordered_json doc;
    doc["total_reward"] = log.total_reward;
    doc["completion_time"] = log.completion_time;
    doc["control_steps"] = log.control_steps;
    doc["depth_truncated"] = log.depth_truncated;
    std::set<int> seen;
    doc["visits"] = ordered_json::array();
    for (const auto& v : visits(log)) {
        seen.insert(v.target);
        doc["visits"].push_back({{"target", v.target}, {"agent", v.agent}, {"time", v.time}, {"reward", v.reward}});
    }
    doc["unvisited"] = ordered_json::array();
    for (const auto& t : spec.targets) {
        if (!seen.count(t.id)) doc["unvisited"].push_back(t.id);
    }
    const ControllerConfig& c = spec.config;
    doc["config"] = {{"targets", spec.targets.size()},
                     {"agents", spec.agents.size()},
                     {"mission_time", spec.mission_time},
                     {"lookahead_depth", c.lookahead_depth},
                     {"sparsity_gamma", c.sparsity_gamma},
                     {"sparsity_neighbors", c.sparsity_neighbors},
                     {"cooperation_delta", c.cooperation_delta},
                     {"neighbor_count", c.neighbor_count},
                     {"reward_epsilon", c.reward_epsilon},
                     {"tie_tolerance", c.tie_tolerance},
                     {"node_budget", c.node_budget},
                     {"return_to_base", c.return_to_base}};
    if (tsp) {
        ordered_json t;
        t["name"] = tsp->name;
        t["tour_length"] = tsp->tour_length;
        t["complete"] = tsp->complete;
        if (tsp->optimum) {
            t["optimum"] = *tsp->optimum;
            t["gap_percent"] = 100.0 * static_cast<double>(tsp->tour_length - *tsp->optimum) /
                               static_cast<double>(*tsp->optimum);
        }
        t["order"] = tsp->order;
        doc["tsp"] = t;
    }
    return doc.dump(2) + "\n";
}

std::map<std::string, long long> parse_optima_table(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed optima table: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("", "optima table must be an object");
    std::map<std::string, long long> out;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!it.value().is_number_integer()) throw ParseError(it.key(), "expected an integer");
        out[it.key()] = it.value().get<long long>();
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("cannot write " + path);
}

}  // namespace crh
