#include "fjsp/dispatch.hpp"

#include <cassert>

#include "fjsp/errors.hpp"

namespace fjsp {

std::pair<JobRule, MachineRule> decode_action(Action a) {
    if (a.code < 0 || a.code >= kNumActions)
        throw DispatchError(DispatchError::Kind::ActionOutOfRange,
                            "action code " + std::to_string(a.code) + " outside [0, " +
                                std::to_string(kNumActions) + ")");
    return {static_cast<JobRule>(a.code / kNumMachineRules),
            static_cast<MachineRule>(a.code % kNumMachineRules)};
}

Action encode_action(JobRule jr, MachineRule mr) {
    return Action{static_cast<int>(jr) * kNumMachineRules + static_cast<int>(mr)};
}

const char* to_string(JobRule r) {
    switch (r) {
        case JobRule::Spt: return "spt";
        case JobRule::Mwkr: return "mwkr";
        case JobRule::FddMwkr: return "fdd_mwkr";
        case JobRule::Mor: return "mor";
        case JobRule::Lrm: return "lrm";
        case JobRule::Fifo: return "fifo";
    }
    return "?";
}

const char* to_string(MachineRule r) {
    return r == MachineRule::Spt ? "spt" : "lpt";
}

JobRule job_rule_from_string(const std::string& name) {
    for (int i = 0; i < kNumJobRules; ++i)
        if (name == to_string(static_cast<JobRule>(i))) return static_cast<JobRule>(i);
    throw DispatchError(DispatchError::Kind::UnknownRuleName, "unknown job rule: " + name);
}

MachineRule machine_rule_from_string(const std::string& name) {
    for (int i = 0; i < kNumMachineRules; ++i)
        if (name == to_string(static_cast<MachineRule>(i))) return static_cast<MachineRule>(i);
    throw DispatchError(DispatchError::Kind::UnknownRuleName, "unknown machine rule: " + name);
}

bool job_rule_maximizes(JobRule rule) {
    switch (rule) {
        case JobRule::Spt: return false;
        case JobRule::Mwkr: return true;
        case JobRule::FddMwkr: return false;
        case JobRule::Mor: return true;
        case JobRule::Lrm: return true;
        case JobRule::Fifo: return true;
    }
    return true;
}

namespace {

// p_{i,j} under a rule follows the rule's own orientation: the best (min) or
// worst (max) duration over the real choices. For the waiting operation the
// choices are the currently idle machines; for operations further down the
// job all alternatives are still open.
double oriented_duration(const Simulation& sim, JobId job, StageId stage, bool maximize) {
    const Operation& op = sim.instance().op(job, stage);
    const bool waiting = stage == sim.completed_ops(job) && !sim.job_in_process(job);
    TimeUnit best = -1;
    for (const auto& alt : op) {
        if (waiting && !sim.machine_idle(alt.machine - 1)) continue;
        if (best < 0 || (maximize ? alt.duration > best : alt.duration < best))
            best = alt.duration;
    }
    if (best < 0)
        for (const auto& alt : op)
            if (best < 0 || (maximize ? alt.duration > best : alt.duration < best))
                best = alt.duration;
    return static_cast<double>(best);
}

}  // namespace

double job_priority(JobRule rule, const Simulation& sim, JobId job) {
    const int done = sim.completed_ops(job);
    const int n_ops = sim.instance().op_count(job);
    switch (rule) {
        case JobRule::Spt:
            return oriented_duration(sim, job, done, false);
        case JobRule::Mwkr: {
            double remaining = 0.0;
            for (StageId s = done; s < n_ops; ++s)
                remaining += oriented_duration(sim, job, s, true);
            return remaining;
        }
        case JobRule::FddMwkr: {
            double done_work = 0.0;
            for (StageId s = 0; s < done; ++s) done_work += static_cast<double>(sim.cheapest_unused_alternative(job, s));
            double remaining = 0.0;
            for (StageId s = done; s < n_ops; ++s)
                remaining += oriented_duration(sim, job, s, false);
            assert(remaining > 0.0);
            return done_work / remaining;
        }
        case JobRule::Mor:
            return static_cast<double>(n_ops - done + 1);
        case JobRule::Lrm: {
            double remaining = 0.0;
            for (StageId s = done + 1; s < n_ops; ++s)
                remaining += oriented_duration(sim, job, s, true);
            return remaining;
        }
        case JobRule::Fifo:
            return static_cast<double>(sim.clock() - sim.ready_time(job));
    }
    return 0.0;
}

JobId select_job(JobRule rule, const Simulation& sim) {
    const bool maximize = job_rule_maximizes(rule);
    JobId best = -1;
    double best_priority = 0.0;
    for (JobId j = 0; j < sim.instance().num_jobs; ++j) {
        if (!sim.assignable(j)) continue;
        const double priority = job_priority(rule, sim, j);
        if (best < 0 || (maximize ? priority > best_priority : priority < best_priority)) {
            best = j;
            best_priority = priority;
        }
    }
    if (best < 0)
        throw DispatchError(DispatchError::Kind::NoAssignableJob, "no assignable job");
    return best;
}

MachineId select_machine(MachineRule rule, const Simulation& sim, JobId job) {
    const auto candidates = sim.idle_candidates(job);
    if (candidates.empty())
        throw DispatchError(DispatchError::Kind::NoIdleCandidate,
                            "job " + std::to_string(job) + " has no idle eligible machine");
    MachineId best = -1;
    TimeUnit best_duration = 0;
    for (const auto& [machine, duration] : candidates) {
        const bool better = best < 0 || (rule == MachineRule::Spt ? duration < best_duration
                                                                  : duration > best_duration) ||
                            (duration == best_duration && machine < best);
        if (better) {
            best = machine;
            best_duration = duration;
        }
    }
    return best;
}

}  // namespace fjsp
