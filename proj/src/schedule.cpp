#include "fjsp/schedule.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fjsp/errors.hpp"

namespace fjsp {

std::string schedule_to_csv(const Schedule& s) {
    std::ostringstream out;
    out << "job,stage,machine,start,end\n";
    for (const auto& e : s.entries)
        out << e.job << ',' << e.stage << ',' << e.machine << ',' << e.start << ',' << e.end
            << '\n';
    return out.str();
}

std::string schedule_to_json(const Schedule& s) {
    nlohmann::json j;
    j["makespan"] = s.makespan;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : s.entries) {
        j["entries"].push_back({{"job", e.job},
                                {"stage", e.stage},
                                {"machine", e.machine},
                                {"start", e.start},
                                {"end", e.end}});
    }
    return j.dump(2) + "\n";
}

Schedule schedule_from_csv(std::istream& in) {
    Schedule s;
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty schedule file");
    if (line != "job,stage,machine,start,end")
        throw FormatError("unexpected schedule CSV header: '" + line + "'");
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        ScheduleEntry e{};
        if (!(row >> e.job >> e.stage >> e.machine >> e.start >> e.end))
            throw FormatError("bad schedule CSV row at line " + std::to_string(line_no));
        std::string extra;
        if (row >> extra)
            throw FormatError("trailing fields in schedule CSV at line " + std::to_string(line_no));
        s.entries.push_back(e);
    }
    for (const auto& e : s.entries) s.makespan = std::max(s.makespan, e.end);
    return s;
}

Schedule schedule_from_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("bad schedule JSON: ") + ex.what());
    }
    Schedule s;
    try {
        for (const auto& item : j.at("entries")) {
            s.entries.push_back({item.at("job").get<JobId>(), item.at("stage").get<StageId>(),
                                 item.at("machine").get<MachineId>(),
                                 item.at("start").get<TimeUnit>(), item.at("end").get<TimeUnit>()});
        }
        s.makespan = j.value("makespan", TimeUnit{0});
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("bad schedule JSON: ") + ex.what());
    }
    if (s.makespan == 0)
        for (const auto& e : s.entries) s.makespan = std::max(s.makespan, e.end);
    return s;
}

Schedule load_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open schedule file: " + path);
    const int first = in.peek();
    if (first == '{' || first == '[') return schedule_from_json(in);
    return schedule_from_csv(in);
}

void save_schedule(const Schedule& s, const std::string& path, const std::string& format) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write schedule file: " + path);
    out << (format == "json" ? schedule_to_json(s) : schedule_to_csv(s));
}

}  // namespace fjsp
