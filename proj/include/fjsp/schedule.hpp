#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "fjsp/types.hpp"

namespace fjsp {

struct ScheduleEntry {
    JobId job;
    StageId stage;
    MachineId machine;  // 0-based
    TimeUnit start;
    TimeUnit end;

    bool operator==(const ScheduleEntry&) const = default;
};

struct Schedule {
    std::vector<ScheduleEntry> entries;
    TimeUnit makespan = 0;

    bool operator==(const Schedule&) const = default;
};

// CSV schema: header "job,stage,machine,start,end", one row per entry.
// The JSON form mirrors it: {"makespan": N, "entries": [{...}]}.
std::string schedule_to_csv(const Schedule& s);
std::string schedule_to_json(const Schedule& s);
Schedule schedule_from_csv(std::istream& in);
Schedule schedule_from_json(std::istream& in);
Schedule load_schedule(const std::string& path);  // picks format by content
void save_schedule(const Schedule& s, const std::string& path, const std::string& format);

}  // namespace fjsp
