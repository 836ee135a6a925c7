#pragma once
#include <string>
#include <utility>

#include "fjsp/simulator.hpp"
#include "fjsp/types.hpp"

namespace fjsp {

// Canonical order; the action code is job_rule * 2 + machine_rule.
enum class JobRule { Spt, Mwkr, FddMwkr, Mor, Lrm, Fifo };
enum class MachineRule { Spt, Lpt };

struct Action {
    int code = 0;  // in [0, 12)
};

std::pair<JobRule, MachineRule> decode_action(Action a);
Action encode_action(JobRule jr, MachineRule mr);

// CLI spellings: spt mwkr fdd_mwkr mor lrm fifo / spt lpt
const char* to_string(JobRule r);
const char* to_string(MachineRule r);
JobRule job_rule_from_string(const std::string& name);
MachineRule machine_rule_from_string(const std::string& name);

// Priority of an assignable job under a rule. Durations of unscheduled
// operations enter as the arithmetic mean over their machine alternatives.
double job_priority(JobRule rule, const Simulation& sim, JobId job);
bool job_rule_maximizes(JobRule rule);

// Argmin/argmax over the assignable jobs, ties to the lowest job id.
JobId select_job(JobRule rule, const Simulation& sim);

// Among the *idle* eligible machines of the job's next operation, the one
// with min (SPT) or max (LPT) duration; ties to the lowest machine id.
MachineId select_machine(MachineRule rule, const Simulation& sim, JobId job);

}  // namespace fjsp
