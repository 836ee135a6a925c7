#pragma once
#include <string>

#include "fjsp/schedule.hpp"

namespace fjsp {

// Plot-ready JSON: per-machine lanes of (job, stage, start, end) plus the
// computed vacancy intervals; busy_total + vacancy_total == machines * makespan.
// num_machines < 0 infers the count from the schedule's largest machine id.
std::string gantt_json(const Schedule& schedule, int num_machines = -1);

}  // namespace fjsp
