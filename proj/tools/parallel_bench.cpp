// Times the OpenMP kernels against their serial reference implementations:
// the PDR sweep and the per-iteration trajectory collection.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fjsp/agent.hpp"
#include "fjsp/instance.hpp"
#include "fjsp/runner.hpp"

namespace fs = std::filesystem;
using namespace fjsp;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double time_best_of(int repeats, F&& f) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string data_dir = argc > 1 ? argv[1] : "data";
    InstanceList instances;
    for (const auto& entry : fs::recursive_directory_iterator(data_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".fjs")
            instances.push_back(std::make_shared<RawInstance>(load_instance(entry.path().string())));
    std::sort(instances.begin(), instances.end(),
              [](const auto& a, const auto& b) { return a->name < b->name; });
    if (instances.empty()) {
        std::cerr << "no .fjs files under " << data_dir << '\n';
        return 1;
    }

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel paths run serially\n");
#endif
    std::printf("instances: %zu\n\n", instances.size());

    std::vector<std::pair<JobRule, MachineRule>> pairs;
    for (int jr = 0; jr < kNumJobRules; ++jr)
        for (int mr = 0; mr < kNumMachineRules; ++mr)
            pairs.emplace_back(static_cast<JobRule>(jr), static_cast<MachineRule>(mr));

    SweepTable serial_table, parallel_table;
    const double sweep_serial =
        time_best_of(3, [&] { serial_table = run_pdr_sweep_serial(instances, pairs); });
    const double sweep_parallel =
        time_best_of(3, [&] { parallel_table = run_pdr_sweep_parallel(instances, pairs); });
    const bool sweep_same = serial_table.makespans == parallel_table.makespans;
    std::printf("pdr sweep (%zu x %zu cells)\n", instances.size(), pairs.size());
    std::printf("  serial    %8.3f s\n", sweep_serial);
    std::printf("  openmp    %8.3f s   speedup %.2fx   results %s\n", sweep_parallel,
                sweep_serial / sweep_parallel, sweep_same ? "identical" : "DIFFER");

    // trajectory collection on the largest instance, untrained policy
    const auto& big = *std::max_element(instances.begin(), instances.end(),
                                        [](const auto& a, const auto& b) {
                                            return a->total_ops() < b->total_ops();
                                        });
    Rng rng(7);
    Mlp actor = Mlp::init(2 * big->num_jobs, 2 * big->num_jobs, kNumActions, rng);
    TrajectorySet ts, tp;
    const double collect_serial = time_best_of(3, [&] {
        ts = collect_trajectories(big, actor, 9, 11, 1, 0.999, 1.0, false);
    });
    const double collect_parallel = time_best_of(3, [&] {
        tp = collect_trajectories(big, actor, 9, 11, 1, 0.999, 1.0, true);
    });
    const bool collect_same = ts.makespans == tp.makespans;
    std::printf("\ntrajectory collection (9 episodes on %s, %d ops)\n", big->name.c_str(),
                big->total_ops());
    std::printf("  serial    %8.3f s\n", collect_serial);
    std::printf("  openmp    %8.3f s   speedup %.2fx   results %s\n", collect_parallel,
                collect_serial / collect_parallel, collect_same ? "identical" : "DIFFER");

    return sweep_same && collect_same ? 0 : 1;
}
