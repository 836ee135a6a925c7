#pragma once
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fjsp/dispatch.hpp"
#include "fjsp/env.hpp"
#include "fjsp/instance.hpp"
#include "fjsp/schedule.hpp"

namespace fjsp {

struct EpisodeResult {
    Schedule schedule;
    std::vector<TimeUnit> rewards;  // one per decision step
    TimeUnit reward_total = 0;
    TimeUnit makespan = 0;
};

// Rolls one full episode with the same action at every decision point.
EpisodeResult run_fixed_action(std::shared_ptr<const RawInstance> inst, Action action);
EpisodeResult run_rule_pair(std::shared_ptr<const RawInstance> inst, JobRule jr, MachineRule mr);

struct RunReport {
    std::string instance;
    std::string method;
    TimeUnit makespan = 0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> utilization;  // per machine, busy / makespan
};

std::vector<double> machine_utilization(const Schedule& schedule, int num_machines);

// One makespan per (instance, rule pair), plus the per-instance minimum.
struct SweepTable {
    std::vector<std::string> instances;
    std::vector<std::pair<JobRule, MachineRule>> pairs;
    std::vector<std::vector<TimeUnit>> makespans;  // [instance][pair]
    std::vector<TimeUnit> min_pdr;                 // per instance

    double average(size_t pair_index) const;
    double average_min_pdr() const;
};

using InstanceList = std::vector<std::shared_ptr<const RawInstance>>;

// The parallel kernel distributes (instance x pair) cells over OpenMP threads;
// the serial version is the reference. Results are identical element-wise.
SweepTable run_pdr_sweep_serial(const InstanceList& instances,
                                const std::vector<std::pair<JobRule, MachineRule>>& pairs);
SweepTable run_pdr_sweep_parallel(const InstanceList& instances,
                                  const std::vector<std::pair<JobRule, MachineRule>>& pairs);
SweepTable run_pdr_sweep(const InstanceList& instances,
                         const std::vector<std::pair<JobRule, MachineRule>>& pairs, bool parallel);

// Wide CSV: one row per instance, one column per pair, minPDR column, AVG row.
std::string sweep_to_csv(const SweepTable& table);
std::string sweep_to_json(const SweepTable& table);

}  // namespace fjsp
