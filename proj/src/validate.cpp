#include "fjsp/validate.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fjsp {

Verdict validate_schedule(const RawInstance& inst, const Schedule& schedule,
                          bool require_complete) {
    Verdict verdict;
    auto flag = [&](Violation::Kind kind, const std::string& detail) {
        verdict.violations.push_back({kind, detail});
    };
    auto op_label = [](const ScheduleEntry& e) {
        return "job " + std::to_string(e.job) + " stage " + std::to_string(e.stage);
    };

    std::map<std::pair<JobId, StageId>, const ScheduleEntry*> seen;
    std::vector<std::vector<const ScheduleEntry*>> per_machine(
        static_cast<size_t>(inst.num_machines));
    std::vector<std::vector<const ScheduleEntry*>> per_job(static_cast<size_t>(inst.num_jobs));

    for (const auto& e : schedule.entries) {
        if (e.job < 0 || e.job >= inst.num_jobs || e.stage < 0 || e.stage >= inst.op_count(e.job)) {
            flag(Violation::Kind::UnknownOperation, op_label(e) + " does not exist");
            continue;
        }
        if (e.machine < 0 || e.machine >= inst.num_machines) {
            flag(Violation::Kind::BadMachine,
                 op_label(e) + " on machine " + std::to_string(e.machine));
            continue;
        }
        if (e.start < 0 || e.end < e.start) {
            flag(Violation::Kind::NegativeTime, op_label(e) + " has start " +
                                                    std::to_string(e.start) + ", end " +
                                                    std::to_string(e.end));
            continue;
        }
        if (!seen.emplace(std::make_pair(e.job, e.stage), &e).second) {
            flag(Violation::Kind::DuplicateOperation, op_label(e) + " scheduled twice");
            continue;
        }
        const TimeUnit want = inst.duration_on(e.job, e.stage, e.machine + 1);
        if (want < 0) {
            flag(Violation::Kind::Ineligible,
                 op_label(e) + " cannot run on machine " + std::to_string(e.machine));
        } else if (e.end - e.start != want) {
            flag(Violation::Kind::DurationMismatch,
                 op_label(e) + " takes " + std::to_string(e.end - e.start) + ", instance says " +
                     std::to_string(want));
        }
        per_machine[static_cast<size_t>(e.machine)].push_back(&e);
        per_job[static_cast<size_t>(e.job)].push_back(&e);
    }

    for (auto& lane : per_machine) {
        std::sort(lane.begin(), lane.end(),
                  [](const ScheduleEntry* a, const ScheduleEntry* b) { return a->start < b->start; });
        for (size_t i = 1; i < lane.size(); ++i) {
            if (lane[i]->start < lane[i - 1]->end) {
                flag(Violation::Kind::MachineOverlap,
                     op_label(*lane[i - 1]) + " and " + op_label(*lane[i]) +
                         " overlap on machine " + std::to_string(lane[i]->machine));
            }
        }
    }

    for (JobId j = 0; j < inst.num_jobs; ++j) {
        auto& ops = per_job[static_cast<size_t>(j)];
        std::sort(ops.begin(), ops.end(),
                  [](const ScheduleEntry* a, const ScheduleEntry* b) { return a->stage < b->stage; });
        for (size_t i = 0; i < ops.size(); ++i) {
            if (ops[i]->stage != static_cast<StageId>(i)) {
                flag(Violation::Kind::MissingPredecessor,
                     op_label(*ops[i]) + " scheduled but stage " + std::to_string(i) +
                         " is absent");
                break;
            }
            if (i > 0 && ops[i]->start < ops[i - 1]->end) {
                flag(Violation::Kind::PrecedenceBroken,
                     op_label(*ops[i]) + " starts at " + std::to_string(ops[i]->start) +
                         " before its predecessor ends at " + std::to_string(ops[i - 1]->end));
            }
        }
        if (require_complete && static_cast<int>(ops.size()) != inst.op_count(j)) {
            flag(Violation::Kind::Incomplete,
                 "job " + std::to_string(j) + " has " + std::to_string(ops.size()) + " of " +
                     std::to_string(inst.op_count(j)) + " operations scheduled");
        }
    }

    TimeUnit max_end = 0;
    for (const auto& e : schedule.entries) max_end = std::max(max_end, e.end);
    if (schedule.makespan != max_end) {
        flag(Violation::Kind::MakespanMismatch,
             "stored makespan " + std::to_string(schedule.makespan) + " but entries end at " +
                 std::to_string(max_end));
    }
    return verdict;
}

std::string describe(const Verdict& verdict) {
    if (verdict.ok()) return "PASS\n";
    std::ostringstream out;
    out << "FAIL (" << verdict.violations.size() << " violation"
        << (verdict.violations.size() == 1 ? "" : "s") << ")\n";
    for (const auto& v : verdict.violations) out << "  - " << v.detail << '\n';
    return out.str();
}

}  // namespace fjsp
