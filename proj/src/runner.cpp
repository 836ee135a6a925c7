#include "fjsp/runner.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace fjsp {

EpisodeResult run_fixed_action(std::shared_ptr<const RawInstance> inst, Action action) {
    Environment env(std::move(inst));
    env.reset();
    EpisodeResult result;
    while (!env.done()) {
        const StepResult step = env.step(action);
        result.rewards.push_back(step.reward);
        result.reward_total += step.reward;
    }
    result.schedule = env.sim().schedule();
    result.makespan = env.sim().makespan();
    return result;
}

EpisodeResult run_rule_pair(std::shared_ptr<const RawInstance> inst, JobRule jr, MachineRule mr) {
    return run_fixed_action(std::move(inst), encode_action(jr, mr));
}

std::vector<double> machine_utilization(const Schedule& schedule, int num_machines) {
    std::vector<TimeUnit> busy(static_cast<size_t>(num_machines), 0);
    for (const auto& e : schedule.entries) busy[static_cast<size_t>(e.machine)] += e.end - e.start;
    std::vector<double> util(static_cast<size_t>(num_machines), 0.0);
    if (schedule.makespan > 0)
        for (int m = 0; m < num_machines; ++m)
            util[static_cast<size_t>(m)] =
                static_cast<double>(busy[static_cast<size_t>(m)]) /
                static_cast<double>(schedule.makespan);
    return util;
}

double SweepTable::average(size_t pair_index) const {
    double total = 0.0;
    for (const auto& row : makespans) total += static_cast<double>(row[pair_index]);
    return total / static_cast<double>(makespans.size());
}

double SweepTable::average_min_pdr() const {
    double total = 0.0;
    for (TimeUnit t : min_pdr) total += static_cast<double>(t);
    return total / static_cast<double>(min_pdr.size());
}

namespace {

SweepTable make_table(const InstanceList& instances,
                      const std::vector<std::pair<JobRule, MachineRule>>& pairs) {
    SweepTable table;
    table.pairs = pairs;
    table.instances.reserve(instances.size());
    for (const auto& inst : instances) table.instances.push_back(inst->name);
    table.makespans.assign(instances.size(), std::vector<TimeUnit>(pairs.size(), 0));
    table.min_pdr.assign(instances.size(), 0);
    return table;
}

void fill_minima(SweepTable& table) {
    for (size_t i = 0; i < table.makespans.size(); ++i)
        table.min_pdr[i] = *std::min_element(table.makespans[i].begin(), table.makespans[i].end());
}

}  // namespace

SweepTable run_pdr_sweep_serial(const InstanceList& instances,
                                const std::vector<std::pair<JobRule, MachineRule>>& pairs) {
    SweepTable table = make_table(instances, pairs);
    for (size_t i = 0; i < instances.size(); ++i)
        for (size_t p = 0; p < pairs.size(); ++p)
            table.makespans[i][p] =
                run_rule_pair(instances[i], pairs[p].first, pairs[p].second).makespan;
    fill_minima(table);
    return table;
}

SweepTable run_pdr_sweep_parallel(const InstanceList& instances,
                                  const std::vector<std::pair<JobRule, MachineRule>>& pairs) {
    SweepTable table = make_table(instances, pairs);
    const int cells = static_cast<int>(instances.size() * pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < cells; ++c) {
        const size_t i = static_cast<size_t>(c) / pairs.size();
        const size_t p = static_cast<size_t>(c) % pairs.size();
        table.makespans[i][p] =
            run_rule_pair(instances[i], pairs[p].first, pairs[p].second).makespan;
    }
    fill_minima(table);
    return table;
}

SweepTable run_pdr_sweep(const InstanceList& instances,
                         const std::vector<std::pair<JobRule, MachineRule>>& pairs, bool parallel) {
    return parallel ? run_pdr_sweep_parallel(instances, pairs)
                    : run_pdr_sweep_serial(instances, pairs);
}

namespace {
std::string pair_label(const std::pair<JobRule, MachineRule>& pair) {
    return std::string(to_string(pair.first)) + "-" + to_string(pair.second);
}
}  // namespace

std::string sweep_to_csv(const SweepTable& table) {
    std::ostringstream out;
    out << "instance";
    for (const auto& pair : table.pairs) out << ',' << pair_label(pair);
    out << ",minPDR\n";
    for (size_t i = 0; i < table.instances.size(); ++i) {
        out << table.instances[i];
        for (TimeUnit t : table.makespans[i]) out << ',' << t;
        out << ',' << table.min_pdr[i] << '\n';
    }
    out << "AVG";
    out << std::fixed << std::setprecision(2);
    for (size_t p = 0; p < table.pairs.size(); ++p) out << ',' << table.average(p);
    out << ',' << table.average_min_pdr() << '\n';
    return out.str();
}

std::string sweep_to_json(const SweepTable& table) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (size_t i = 0; i < table.instances.size(); ++i) {
        nlohmann::json row;
        row["instance"] = table.instances[i];
        for (size_t p = 0; p < table.pairs.size(); ++p)
            row[pair_label(table.pairs[p])] = table.makespans[i][p];
        row["minPDR"] = table.min_pdr[i];
        j["rows"].push_back(row);
    }
    nlohmann::json avg;
    for (size_t p = 0; p < table.pairs.size(); ++p)
        avg[pair_label(table.pairs[p])] = table.average(p);
    avg["minPDR"] = table.average_min_pdr();
    j["average"] = avg;
    return j.dump(2) + "\n";
}

}  // namespace fjsp
