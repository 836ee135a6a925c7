#pragma once
#include <string>
#include <vector>

#include "fjsp/instance.hpp"
#include "fjsp/schedule.hpp"

namespace fjsp {

struct Violation {
    enum class Kind {
        UnknownOperation,   // (job, stage) outside the instance
        DuplicateOperation, // (job, stage) scheduled twice
        Ineligible,         // machine not in the operation's alternative set
        DurationMismatch,   // end - start != instance duration on that machine
        PrecedenceBroken,   // op starts before its predecessor ends
        MissingPredecessor, // op present while an earlier stage is absent
        MachineOverlap,     // two entries overlap on one machine
        MakespanMismatch,   // stored makespan != max end
        Incomplete,         // not every operation scheduled
        BadMachine,         // machine id outside [0, num_machines)
        NegativeTime,
    };

    Kind kind;
    std::string detail;
};

struct Verdict {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Independent schedule checker: reads only the raw instance and the schedule,
// never any engine state. `require_complete` additionally demands that every
// operation of the instance appears exactly once.
Verdict validate_schedule(const RawInstance& inst, const Schedule& schedule,
                          bool require_complete = true);

std::string describe(const Verdict& verdict);

}  // namespace fjsp
