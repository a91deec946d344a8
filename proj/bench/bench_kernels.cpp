// Serial reference vs OpenMP timings for the parallel kernels.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crh/io.hpp"
#include "crh/lookahead.hpp"
#include "crh/oracle.hpp"

using namespace crh;

namespace {

double best_of(int reps, const std::function<void()>& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void report(const char* name, double serial, double parallel, bool agree) {
    std::printf("%-28s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
                serial / parallel, agree ? "agree" : "MISMATCH");
}

MissionSpec instance(int targets, int agents, int depth, std::uint64_t seed) {
    RandomMissionParams p;
    p.target_count = targets;
    p.agent_count = agents;
    p.space = {{0.0, 0.0}, {100.0, 100.0}};
    p.seed = seed;
    p.config.lookahead_depth = depth;
    return gen_random(p);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    {
        const MissionSpec s = instance(20, 3, 4, 1);
        const Problem pb(s);
        const MissionState st = initial_state(s);
        ControlDecision a, b;
        const double ts = best_of(3, [&] { a = solve_serial(pb, st); });
        const double tp = best_of(3, [&] { b = solve(pb, st); });
        report("lookahead solve (K=4, N=3)", ts, tp,
               a.chosen_index == b.chosen_index && a.objective_value == b.objective_value);
    }
    {
        const MissionSpec s = instance(10, 1, 1, 2);
        OracleResult a, b;
        const double ts = best_of(1, [&] { a = exhaustive_optimal_serial(s); });
        const double tp = best_of(1, [&] { b = exhaustive_optimal(s); });
        report("exhaustive oracle (M=10)", ts, tp, a.order == b.order && a.reward == b.reward);
    }
    {
        const MissionSpec s = instance(8, 2, 1, 3);
        const Problem pb(s);
        const MissionState st = initial_state(s);
        GridCheck a, b;
        const double ts = best_of(1, [&] { a = discretized_control_check_serial(pb, st, 360); });
        const double tp = best_of(1, [&] { b = discretized_control_check(pb, st, 360); });
        report("heading grid (n=360, N=2)", ts, tp, a.best_value == b.best_value && a.best_headings == b.best_headings);
    }
    return 0;
}
