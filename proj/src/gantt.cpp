#include "fjsp/gantt.hpp"

#include <algorithm>
#include <vector>

#include <json.hpp>

#include "fjsp/errors.hpp"

namespace fjsp {

std::string gantt_json(const Schedule& schedule, int num_machines) {
    if (num_machines < 0) {
        for (const auto& e : schedule.entries) num_machines = std::max(num_machines, e.machine);
        ++num_machines;
    }
    for (const auto& e : schedule.entries)
        if (e.machine >= num_machines)
            throw FormatError("schedule uses machine " + std::to_string(e.machine) +
                              " but only " + std::to_string(num_machines) + " lanes requested");

    std::vector<std::vector<const ScheduleEntry*>> lanes(static_cast<size_t>(num_machines));
    for (const auto& e : schedule.entries) lanes[static_cast<size_t>(e.machine)].push_back(&e);

    nlohmann::json j;
    j["makespan"] = schedule.makespan;
    j["machines"] = num_machines;
    j["lanes"] = nlohmann::json::array();
    TimeUnit busy_total = 0;
    TimeUnit vacancy_total = 0;
    for (int m = 0; m < num_machines; ++m) {
        auto& lane = lanes[static_cast<size_t>(m)];
        std::sort(lane.begin(), lane.end(),
                  [](const ScheduleEntry* a, const ScheduleEntry* b) { return a->start < b->start; });
        nlohmann::json ops = nlohmann::json::array();
        nlohmann::json vacancies = nlohmann::json::array();
        TimeUnit cursor = 0;
        for (const ScheduleEntry* e : lane) {
            if (e->start > cursor) {
                vacancies.push_back({{"start", cursor}, {"end", e->start}});
                vacancy_total += e->start - cursor;
            }
            ops.push_back(
                {{"job", e->job}, {"stage", e->stage}, {"start", e->start}, {"end", e->end}});
            busy_total += e->end - e->start;
            cursor = e->end;
        }
        if (cursor < schedule.makespan) {
            vacancies.push_back({{"start", cursor}, {"end", schedule.makespan}});
            vacancy_total += schedule.makespan - cursor;
        }
        j["lanes"].push_back({{"machine", m}, {"ops", ops}, {"vacancies", vacancies}});
    }
    j["busy_total"] = busy_total;
    j["vacancy_total"] = vacancy_total;
    return j.dump(2) + "\n";
}

}  // namespace fjsp
