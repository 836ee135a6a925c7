#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fjsp/agent.hpp"
#include "fjsp/dispatch.hpp"
#include "fjsp/errors.hpp"
#include "fjsp/gantt.hpp"
#include "fjsp/instance.hpp"
#include "fjsp/runner.hpp"
#include "fjsp/validate.hpp"

namespace fs = std::filesystem;
using namespace fjsp;

namespace {

std::vector<std::string> expand_instance_paths(const std::vector<std::string>& args) {
    std::vector<std::string> paths;
    for (const auto& arg : args) {
        if (fs::is_directory(arg)) {
            std::vector<std::string> found;
            for (const auto& entry : fs::recursive_directory_iterator(arg))
                if (entry.is_regular_file() && entry.path().extension() == ".fjs")
                    found.push_back(entry.path().string());
            std::sort(found.begin(), found.end());
            paths.insert(paths.end(), found.begin(), found.end());
        } else {
            paths.push_back(arg);
        }
    }
    return paths;
}

struct LoadedInstances {
    InstanceList instances;
    int failures = 0;
};

LoadedInstances load_instances(const std::vector<std::string>& args) {
    LoadedInstances out;
    for (const auto& path : expand_instance_paths(args)) {
        try {
            out.instances.push_back(std::make_shared<RawInstance>(load_instance(path)));
        } catch (const Error& e) {
            std::cerr << path << ": " << e.what() << '\n';
            ++out.failures;
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path);
    out << content;
}

std::vector<std::pair<JobRule, MachineRule>> rule_pairs(const std::vector<std::string>& job_rules,
                                                        const std::vector<std::string>& machine_rules) {
    std::vector<std::pair<JobRule, MachineRule>> pairs;
    for (const auto& jr : job_rules)
        for (const auto& mr : machine_rules)
            pairs.emplace_back(job_rule_from_string(jr), machine_rule_from_string(mr));
    return pairs;
}

int cmd_pdr(const std::vector<std::string>& instance_args, std::vector<std::string> job_rules,
            std::vector<std::string> machine_rules, const std::string& out_dir,
            const std::string& format, bool serial) {
    LoadedInstances loaded = load_instances(instance_args);
    if (loaded.instances.empty()) {
        std::cerr << "no usable instances\n";
        return 1;
    }
    const auto pairs = rule_pairs(job_rules, machine_rules);
    const SweepTable table = run_pdr_sweep(loaded.instances, pairs, !serial);

    // every emitted schedule re-checked by the independent validator
    for (const auto& inst : loaded.instances) {
        for (const auto& [jr, mr] : pairs) {
            const EpisodeResult episode = run_rule_pair(inst, jr, mr);
            const Verdict verdict = validate_schedule(*inst, episode.schedule);
            if (!verdict.ok()) {
                std::cerr << inst->name << " " << to_string(jr) << "-" << to_string(mr)
                          << ": schedule failed validation\n"
                          << describe(verdict);
                return 1;
            }
        }
    }

    const std::string text = format == "json" ? sweep_to_json(table) : sweep_to_csv(table);
    if (out_dir.empty()) {
        std::cout << text;
    } else {
        fs::create_directories(out_dir);
        const std::string path = out_dir + "/pdr_results." + (format == "json" ? "json" : "csv");
        write_file(path, text);
        std::cout << "wrote " << path << '\n';
    }
    return loaded.failures == 0 ? 0 : 1;
}

int cmd_train(const std::vector<std::string>& instance_args, std::uint64_t seed, int max_iters,
              double time_limit, const std::string& out_dir, const std::string& format) {
    LoadedInstances loaded = load_instances(instance_args);
    if (loaded.instances.size() != 1) {
        std::cerr << "train expects exactly one instance\n";
        return 1;
    }
    const auto inst = loaded.instances.front();

    TrainConfig cfg;
    if (max_iters > 0) cfg.max_episodes = max_iters;
    cfg.time_limit_seconds = time_limit;

    fs::create_directories(out_dir.empty() ? "." : out_dir);
    const std::string prefix = (out_dir.empty() ? "." : out_dir) + "/" + inst->name;

    const TrainResult result = train(inst, cfg, seed, prefix + "_dump_checkpoint.txt");

    const Verdict verdict = validate_schedule(*inst, result.best_schedule);
    if (!verdict.ok()) {
        std::cerr << "best schedule failed validation\n" << describe(verdict);
        return 1;
    }

    save_checkpoint(result.nets, prefix + "_checkpoint.txt");
    write_file(prefix + "_train_log.csv", convergence_log_csv(result.log));
    save_schedule(result.best_schedule, prefix + "_best_schedule." + (format == "json" ? "json" : "csv"),
                  format);

    std::cout << "instance " << inst->name << ", iterations " << result.iterations_run
              << (result.converged ? " (converged)" : "") << ", best makespan "
              << result.best_makespan << '\n'
              << "reference: paper reports mean 42 on MK01 and MK-average 180.4 for this method\n";
    return 0;
}

int cmd_eval(const std::vector<std::string>& instance_args, const std::string& checkpoint,
             const std::string& out_dir, const std::string& format) {
    LoadedInstances loaded = load_instances(instance_args);
    if (loaded.instances.size() != 1) {
        std::cerr << "eval expects exactly one instance\n";
        return 1;
    }
    const auto inst = loaded.instances.front();
    const PpoNets nets = load_checkpoint(checkpoint);
    const EpisodeResult episode = greedy_rollout(nets.actor, inst);

    const Verdict verdict = validate_schedule(*inst, episode.schedule);
    if (!verdict.ok()) {
        std::cerr << "schedule failed validation\n" << describe(verdict);
        return 1;
    }
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        save_schedule(episode.schedule,
                      out_dir + "/" + inst->name + "_schedule." + (format == "json" ? "json" : "csv"),
                      format);
    }
    std::cout << inst->name << " greedy makespan " << episode.makespan << '\n';
    return 0;
}

int cmd_validate(const std::string& schedule_path, const std::vector<std::string>& instance_args,
                 bool partial) {
    LoadedInstances loaded = load_instances(instance_args);
    if (loaded.instances.size() != 1) {
        std::cerr << "validate expects exactly one instance\n";
        return 1;
    }
    const Schedule schedule = load_schedule(schedule_path);
    const Verdict verdict = validate_schedule(*loaded.instances.front(), schedule, !partial);
    std::cout << describe(verdict);
    return verdict.ok() ? 0 : 1;
}

int cmd_gantt(const std::string& schedule_path, const std::vector<std::string>& instance_args,
              const std::string& out_dir) {
    const Schedule schedule = load_schedule(schedule_path);
    int machines = -1;
    if (!instance_args.empty()) {
        LoadedInstances loaded = load_instances(instance_args);
        if (loaded.instances.size() != 1) {
            std::cerr << "gantt expects at most one instance\n";
            return 1;
        }
        machines = loaded.instances.front()->num_machines;
    }
    const std::string text = gantt_json(schedule, machines);
    if (out_dir.empty()) {
        std::cout << text;
    } else {
        fs::create_directories(out_dir);
        write_file(out_dir + "/gantt.json", text);
        std::cout << "wrote " << out_dir << "/gantt.json\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flexible job-shop scheduling: discrete-event simulation, dispatching rules, "
                 "and PPO training"};
    app.require_subcommand(1);

    std::vector<std::string> instances;
    std::vector<std::string> job_rules = {"spt", "mwkr", "fdd_mwkr", "mor", "lrm", "fifo"};
    std::vector<std::string> machine_rules = {"spt"};
    std::string out_dir;
    std::string format = "csv";
    std::string schedule_path;
    std::string checkpoint_path;
    std::uint64_t seed = 1;
    int max_iters = 0;
    double time_limit = 3600.0;
    bool partial = false;
    bool serial = false;

    auto* pdr = app.add_subcommand("pdr", "run dispatching-rule sweeps");
    pdr->add_option("--instances", instances, "instance files or directories")->required();
    pdr->add_option("--job-rules", job_rules, "job rules (spt mwkr fdd_mwkr mor lrm fifo)");
    pdr->add_option("--machine-rules", machine_rules, "machine rules (spt lpt)");
    pdr->add_option("--out", out_dir, "output directory (default: stdout)");
    pdr->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    pdr->add_flag("--serial", serial, "use the serial reference sweep");

    auto* tr = app.add_subcommand("train", "train a PPO policy on one instance");
    tr->add_option("--instances", instances, "one instance file")->required();
    tr->add_option("--seed", seed, "RNG seed");
    tr->add_option("--max-iters", max_iters, "max training iterations (default 8000)");
    tr->add_option("--time-limit", time_limit, "wall-clock limit in seconds (default 3600)");
    tr->add_option("--out", out_dir, "output directory")->required();
    tr->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    auto* ev = app.add_subcommand("eval", "greedy rollout of a trained checkpoint");
    ev->add_option("--instances", instances, "one instance file")->required();
    ev->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
    ev->add_option("--out", out_dir, "output directory");
    ev->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    auto* va = app.add_subcommand("validate", "check a schedule against its instance");
    va->add_option("--schedule", schedule_path, "schedule CSV/JSON file")->required();
    va->add_option("--instances", instances, "the matching instance file")->required();
    va->add_flag("--partial", partial, "accept schedules that cover only part of the instance");

    auto* ga = app.add_subcommand("gantt", "emit plot-ready lane/vacancy JSON for a schedule");
    ga->add_option("--schedule", schedule_path, "schedule CSV/JSON file")->required();
    ga->add_option("--instances", instances, "instance file (pins the machine count)");
    ga->add_option("--out", out_dir, "output directory (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pdr->parsed()) return cmd_pdr(instances, job_rules, machine_rules, out_dir, format, serial);
        if (tr->parsed()) return cmd_train(instances, seed, max_iters, time_limit, out_dir, format);
        if (ev->parsed()) return cmd_eval(instances, checkpoint_path, out_dir, format);
        if (va->parsed()) return cmd_validate(schedule_path, instances, partial);
        if (ga->parsed()) return cmd_gantt(schedule_path, instances, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
