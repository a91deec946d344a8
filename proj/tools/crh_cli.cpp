// Command-line front end: run, bench-tsp, gen, batch, oracle.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crh/engine.hpp"
#include "crh/errors.hpp"
#include "crh/io.hpp"
#include "crh/oracle.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

// Raised for unreadable or invalid input files.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ControlFlags {
    std::optional<int> lookahead;
    std::optional<double> gamma;
    std::optional<int> neighbors;
    std::optional<double> delta;

    void add(CLI::App* app) {
        app->add_option("--lookahead", lookahead, "Lookahead depth K")->check(CLI::PositiveNumber);
        app->add_option("--gamma", gamma, "Sparsity weight")->check(CLI::Range(0.0, 1.0));
        app->add_option("--sparsity-neighbors", neighbors, "Neighbors in the sparsity factor")
            ->check(CLI::NonNegativeNumber);
        app->add_option("--delta", delta, "Cooperation parameter")->check(CLI::Range(0.0, 0.4999));
    }

    void apply(crh::ControllerConfig& c) const {
        if (lookahead) c.lookahead_depth = *lookahead;
        if (gamma) c.sparsity_gamma = *gamma;
        if (neighbors) c.sparsity_neighbors = *neighbors;
        if (delta) c.cooperation_delta = *delta;
    }
};

std::string read_input(const std::string& path) {
    try {
        return crh::read_text_file(path);
    } catch (const crh::Error& e) {
        throw InputError(e.what());
    }
}

crh::MissionSpec load_mission(const std::string& path) {
    const std::string text = read_input(path);
    try {
        return crh::parse_mission(text);
    } catch (const crh::Error& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string num(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

int cmd_run(const std::string& path, const ControlFlags& flags, const std::string& out,
            const std::string& summary) {
    crh::MissionSpec spec = load_mission(path);
    flags.apply(spec.config);
    const crh::MissionLog log = crh::run_mission(spec);
    if (!out.empty()) crh::write_text_file(out, crh::write_trajectory(log));
    if (!summary.empty()) crh::write_text_file(summary, crh::write_summary(log, spec));
    std::cout << "total_reward " << num(log.total_reward, 6) << "\n"
              << "completion_time " << num(log.completion_time, 6) << "\n"
              << "visited " << crh::visits(log).size() << "/" << spec.targets.size() << "\n";
    return exit_ok;
}

struct BenchTspArgs {
    std::string path;
    ControlFlags flags;
    std::optional<long long> optimum;
    std::optional<double> sensing_fraction;
    std::string optima_table = std::string(CRH_DATA_DIR) + "/tsplib_optima.json";
    double deadline_factor = 10.0;
    std::string out;
    std::string summary;
};

int cmd_bench_tsp(const BenchTspArgs& a) {
    const std::string text = read_input(a.path);
    crh::TsplibInstance inst;
    try {
        inst = crh::parse_tsplib_instance(text);
    } catch (const crh::ParseError& e) {
        if (e.field() == "EDGE_WEIGHT_TYPE") {
            std::cerr << "skipped " << a.path << ": " << e.what() << "\n";
            return exit_ok;
        }
        throw InputError(a.path + ": " + e.what());
    }
    crh::RewardPolicy policy;
    policy.deadline_factor = a.deadline_factor;
    crh::MissionSpec spec = crh::tsplib_mission(inst, policy);
    spec.config.lookahead_depth = 2;
    a.flags.apply(spec.config);
    if (a.sensing_fraction) {
        const double extent = std::max(spec.space.width(), spec.space.height());
        spec.agents[0].sensing_range = *a.sensing_fraction * extent;
    }
    const crh::MissionLog log = crh::run_mission(spec);
    crh::TspReport rep = crh::tsp_report(inst, log);
    rep.optimum = a.optimum;
    if (!rep.optimum) {
        try {
            const auto table = crh::parse_optima_table(crh::read_text_file(a.optima_table));
            if (auto it = table.find(inst.name); it != table.end()) rep.optimum = it->second;
        } catch (const crh::Error& e) {
            std::cerr << "warning: " << e.what() << "\n";
        }
    }
    if (!a.out.empty()) crh::write_text_file(a.out, crh::write_trajectory(log));
    if (!a.summary.empty()) crh::write_text_file(a.summary, crh::write_summary(log, spec, rep));
    std::cout << "instance " << inst.name << "\n"
              << "lookahead " << spec.config.lookahead_depth << "\n"
              << "tour_length " << rep.tour_length << (rep.complete ? "" : " (incomplete tour)") << "\n";
    if (rep.optimum) {
        const double err = 100.0 * static_cast<double>(rep.tour_length - *rep.optimum) /
                           static_cast<double>(*rep.optimum);
        std::cout << "optimum " << *rep.optimum << "\n" << "error_percent " << num(err, 2) << "\n";
    } else {
        std::cout << "optimum unknown\n";
    }
    return exit_ok;
}

struct GenArgs {
    crh::RandomMissionParams params;
    double extent = 300.0;
    std::optional<double> sensing_fraction;
    ControlFlags flags;
};

crh::RandomMissionParams finish_params(const GenArgs& g) {
    crh::RandomMissionParams p = g.params;
    p.space = {{0.0, 0.0}, {g.extent, g.extent}};
    if (g.sensing_fraction) p.sensing_range = *g.sensing_fraction * g.extent;
    g.flags.apply(p.config);
    return p;
}

void add_gen_options(CLI::App* app, GenArgs& g) {
    app->add_option("--targets", g.params.target_count, "Number of targets")->check(CLI::PositiveNumber);
    app->add_option("--agents", g.params.agent_count, "Number of agents")->check(CLI::PositiveNumber);
    app->add_option("--clusters", g.params.cluster_count, "Gaussian clusters (0 = uniform)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--seed", g.params.seed, "Random seed");
    app->add_option("--appearance-fraction", g.params.appearance_fraction,
                    "Fraction of targets appearing after the start")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--reward-low", g.params.reward_low, "Lower bound of initial rewards");
    app->add_option("--reward-high", g.params.reward_high, "Upper bound of initial rewards");
    app->add_option("--deadline-low", g.params.deadline_low, "Lower bound of deadlines");
    app->add_option("--deadline-high", g.params.deadline_high, "Upper bound of deadlines");
    app->add_option("--mission-time", g.params.mission_time, "Mission time")->check(CLI::PositiveNumber);
    app->add_option("--extent", g.extent, "Side of the square mission space")->check(CLI::PositiveNumber);
    app->add_option("--sensing-fraction", g.sensing_fraction,
                    "Sensing range as a fraction of the space extent")
        ->check(CLI::PositiveNumber);
    g.flags.add(app);
}

struct Variant {
    std::string label;
    ControlFlags flags;
};

Variant parse_variant(const std::string& text) {
    Variant v;
    v.label = text;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--variant", "expected key=value in '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        try {
            if (key == "K") {
                v.flags.lookahead = std::stoi(value);
            } else if (key == "gamma") {
                v.flags.gamma = std::stod(value);
            } else if (key == "I") {
                v.flags.neighbors = std::stoi(value);
            } else if (key == "delta") {
                v.flags.delta = std::stod(value);
            } else {
                throw CLI::ValidationError("--variant", "unknown key '" + key + "' (K, gamma, I, delta)");
            }
        } catch (const std::logic_error&) {
            throw CLI::ValidationError("--variant", "bad value in '" + item + "'");
        }
    }
    return v;
}

struct BatchArgs {
    GenArgs gen;
    int missions = 10;
    std::vector<std::string> variants;
    std::string layouts = "uniform";
    std::string summary;
};

int cmd_batch(const BatchArgs& b) {
    std::vector<Variant> variants;
    for (const auto& v : b.variants) variants.push_back(parse_variant(v));
    if (variants.empty()) variants.push_back({"default", {}});
    std::vector<std::string> layouts;
    if (b.layouts == "both") {
        layouts = {"uniform", "clustered"};
    } else {
        layouts = {b.layouts};
    }
    nlohmann::ordered_json doc;
    doc["missions"] = b.missions;
    doc["layouts"] = nlohmann::ordered_json::array();
    for (const auto& layout : layouts) {
        GenArgs g = b.gen;
        if (layout == "uniform") {
            g.params.cluster_count = 0;
        } else if (g.params.cluster_count == 0) {
            g.params.cluster_count = 9;
        }
        const std::size_t nv = variants.size();
        const auto total = static_cast<std::size_t>(b.missions) * nv;
        std::vector<double> reward(total);
        std::vector<double> time(total);
        std::vector<std::string> errors(total);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(total); ++k) {
            const std::size_t m = static_cast<std::size_t>(k) / nv;
            const std::size_t v = static_cast<std::size_t>(k) % nv;
            GenArgs gm = g;
            gm.params.seed = b.gen.params.seed + m;
            crh::RandomMissionParams p = finish_params(gm);
            variants[v].flags.apply(p.config);
            try {
                const auto log = crh::run_mission(crh::gen_random(p));
                reward[k] = log.total_reward;
                time[k] = log.completion_time;
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
        for (const auto& e : errors) {
            if (!e.empty()) throw crh::Error(e);
        }
        std::cout << "layout " << layout << "\n| Mission |";
        for (const auto& v : variants) std::cout << " " << v.label << " reward | " << v.label << " time |";
        std::cout << "\n|---|";
        for (std::size_t v = 0; v < nv; ++v) std::cout << "---|---|";
        std::cout << "\n";
        std::vector<double> avg_r(nv, 0.0);
        std::vector<double> avg_t(nv, 0.0);
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (int m = 0; m < b.missions; ++m) {
            std::cout << "| " << m + 1 << " |";
            nlohmann::ordered_json row;
            row["seed"] = b.gen.params.seed + static_cast<std::uint64_t>(m);
            for (std::size_t v = 0; v < nv; ++v) {
                const std::size_t k = static_cast<std::size_t>(m) * nv + v;
                std::cout << " " << num(reward[k], 2) << " | " << num(time[k], 2) << " |";
                avg_r[v] += reward[k] / b.missions;
                avg_t[v] += time[k] / b.missions;
                row[variants[v].label] = {{"reward", reward[k]}, {"time", time[k]}};
            }
            rows.push_back(row);
            std::cout << "\n";
        }
        std::cout << "| Average |";
        nlohmann::ordered_json avg;
        for (std::size_t v = 0; v < nv; ++v) {
            std::cout << " " << num(avg_r[v], 2) << " | " << num(avg_t[v], 2) << " |";
            avg[variants[v].label] = {{"reward", avg_r[v]}, {"time", avg_t[v]}};
        }
        std::cout << "\n";
        for (std::size_t v = 1; v < nv; ++v) {
            const double change = avg_r[0] != 0.0 ? 100.0 * (avg_r[v] - avg_r[0]) / avg_r[0] : 0.0;
            std::cout << "change " << variants[v].label << " vs " << variants[0].label << ": "
                      << num(change, 2) << "%\n";
        }
        std::cout << "\n";
        doc["layouts"].push_back({{"layout", layout}, {"rows", rows}, {"average", avg}});
    }
    if (!b.summary.empty()) crh::write_text_file(b.summary, doc.dump(2) + "\n");
    return exit_ok;
}

int cmd_oracle(const std::string& path, int max_k, const ControlFlags& flags) {
    crh::MissionSpec spec = load_mission(path);
    flags.apply(spec.config);
    if (spec.agents.size() != 1) throw InputError("oracle needs a single-agent mission");
    if (spec.targets.size() > 10) {
        std::cerr << "too many targets for exhaustive search (" << spec.targets.size() << " > 10)\n";
        return exit_runtime;
    }
    const crh::OracleResult best = crh::exhaustive_optimal(spec);
    std::cout << "oracle_reward " << num(best.reward, 6) << "\norder";
    for (int i : best.order) std::cout << " " << spec.targets[i].id;
    std::cout << "\n| K | reward | gap % | note |\n|---|---|---|---|\n";
    const int top = std::min<int>(max_k, static_cast<int>(spec.targets.size()));
    double prev = -1.0;
    for (int k = 1; k <= std::max(top, 1); ++k) {
        crh::MissionSpec s = spec;
        s.config.lookahead_depth = k;
        const double r = crh::run_mission(s).total_reward;
        const double gap = best.reward > 0.0 ? 100.0 * (best.reward - r) / best.reward : 0.0;
        std::string note;
        if (r > best.reward + 1e-9) note = "above oracle";
        if (prev >= 0.0 && r < prev - 1e-9) note += note.empty() ? "drop vs K-1" : ", drop vs K-1";
        std::cout << "| " << k << " | " << num(r, 6) << " | " << num(gap, 2) << " | " << note << " |\n";
        prev = r;
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative receding horizon controller for reward collection missions"};
    app.require_subcommand(1);

    std::string run_path, run_out, run_summary;
    ControlFlags run_flags;
    auto* run = app.add_subcommand("run", "Simulate a mission file");
    run->add_option("mission", run_path, "Mission JSON file")->required();
    run->add_option("--out", run_out, "Trajectory CSV output");
    run->add_option("--summary", run_summary, "Summary JSON output");
    run_flags.add(run);

    BenchTspArgs tsp;
    auto* bench = app.add_subcommand("bench-tsp", "Run a TSPLIB instance as an equal-reward mission");
    bench->add_option("instance", tsp.path, "TSPLIB file")->required();
    bench->add_option("--optimum", tsp.optimum, "Known optimal tour length");
    bench->add_option("--sensing-fraction", tsp.sensing_fraction,
                      "Sensing range as a fraction of the larger space dimension")
        ->check(CLI::PositiveNumber);
    bench->add_option("--optima-table", tsp.optima_table, "JSON table of known optima");
    bench->add_option("--deadline-factor", tsp.deadline_factor,
                      "Shared deadline as a multiple of the nearest-neighbour tour")
        ->check(CLI::PositiveNumber);
    bench->add_option("--out", tsp.out, "Trajectory CSV output");
    bench->add_option("--summary", tsp.summary, "Summary JSON output");
    tsp.flags.add(bench);

    GenArgs gen;
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a random mission file");
    add_gen_options(gen_cmd, gen);
    gen_cmd->add_option("--out", gen_out, "Output path (stdout when omitted)");

    BatchArgs batch;
    auto* batch_cmd = app.add_subcommand("batch", "Run seeded random missions for several controller variants");
    add_gen_options(batch_cmd, batch.gen);
    batch_cmd->add_option("--missions", batch.missions, "Number of missions")->check(CLI::PositiveNumber);
    batch_cmd->add_option("--variant", batch.variants,
                          "Controller variant as key=value list, e.g. K=2,gamma=0.3,I=5 (repeatable)");
    batch_cmd->add_option("--layouts", batch.layouts, "uniform, clustered or both")
        ->check(CLI::IsMember({"uniform", "clustered", "both"}));
    batch_cmd->add_option("--summary", batch.summary, "Summary JSON output");

    std::string oracle_path;
    int max_k = 10;
    ControlFlags oracle_flags;
    auto* oracle = app.add_subcommand("oracle", "Compare CRH rewards per K with the exhaustive optimum");
    oracle->add_option("mission", oracle_path, "Single-agent mission JSON file")->required();
    oracle->add_option("--max-k", max_k, "Largest lookahead depth to run")->check(CLI::PositiveNumber);
    oracle_flags.add(oracle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*run) return cmd_run(run_path, run_flags, run_out, run_summary);
        if (*bench) return cmd_bench_tsp(tsp);
        if (*gen_cmd) {
            const std::string text = crh::write_mission(crh::gen_random(finish_params(gen)));
            if (gen_out.empty()) {
                std::cout << text;
            } else {
                crh::write_text_file(gen_out, text);
            }
            return exit_ok;
        }
        if (*batch_cmd) return cmd_batch(batch);
        if (*oracle) return cmd_oracle(oracle_path, max_k, oracle_flags);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_usage;
}
