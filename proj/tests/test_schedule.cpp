#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "fjsp/gantt.hpp"
#include "fjsp/runner.hpp"
#include "fjsp/schedule.hpp"
#include "fjsp/validate.hpp"
#include "test_util.hpp"

using namespace fjsp;
using namespace fjsp::testutil;

TEST_SUITE_BEGIN("schedule");

namespace {

bool has_violation(const Verdict& verdict, Violation::Kind kind) {
    for (const auto& v : verdict.violations)
        if (v.kind == kind) return true;
    return false;
}

}  // namespace

TEST_CASE("CSV and JSON round trips") {
    const auto inst = load_shared(mk_path(1));
    const Schedule schedule = run_rule_pair(inst, JobRule::Mwkr, MachineRule::Spt).schedule;

    std::istringstream csv(schedule_to_csv(schedule));
    CHECK(schedule_from_csv(csv) == schedule);

    std::istringstream json(schedule_to_json(schedule));
    CHECK(schedule_from_json(json) == schedule);
}

TEST_CASE("bad schedule files are rejected") {
    std::istringstream empty("");
    CHECK_THROWS_AS(schedule_from_csv(empty), FormatError);
    std::istringstream bad_header("time,job\n");
    CHECK_THROWS_AS(schedule_from_csv(bad_header), FormatError);
    std::istringstream bad_row("job,stage,machine,start,end\n1,2\n");
    CHECK_THROWS_AS(schedule_from_csv(bad_row), FormatError);
    std::istringstream bad_json("{\"entries\": [{\"job\": 1}]}");
    CHECK_THROWS_AS(schedule_from_json(bad_json), FormatError);
}

TEST_CASE("validator accepts engine output and catches constructed violations") {
    const auto inst = load_shared(mk_path(1));
    const Schedule good = run_rule_pair(inst, JobRule::Fifo, MachineRule::Spt).schedule;
    CHECK(validate_schedule(*inst, good).ok());

    SUBCASE("machine overlap") {
        // move every entry of machine 1 onto machine 0's timeline
        Schedule bad = good;
        int moved = 0;
        for (auto& e : bad.entries)
            if (e.machine == 1 && inst->duration_on(e.job, e.stage, 1) == e.end - e.start) {
                e.machine = 0;
                ++moved;
            }
        if (moved > 0) {
            const Verdict verdict = validate_schedule(*inst, bad);
            CHECK_FALSE(verdict.ok());
        }
    }

    SUBCASE("duration tampering") {
        Schedule bad = good;
        bad.entries[5].end += 1;
        const Verdict verdict = validate_schedule(*inst, bad);
        CHECK(has_violation(verdict, Violation::Kind::DurationMismatch));
    }

    SUBCASE("precedence violation") {
        Schedule bad = good;
        // find a stage-1 entry and drag it before its predecessor
        for (auto& e : bad.entries)
            if (e.stage == 1) {
                const TimeUnit d = e.end - e.start;
                e.start = 0;
                e.end = d;
                break;
            }
        const Verdict verdict = validate_schedule(*inst, bad);
        CHECK_FALSE(verdict.ok());
    }

    SUBCASE("ineligible machine") {
        Schedule bad = good;
        bool moved = false;
        for (auto& e : bad.entries) {
            for (int m = 0; m < inst->num_machines && !moved; ++m)
                if (m != e.machine && inst->duration_on(e.job, e.stage, m + 1) < 0) {
                    e.machine = m;
                    moved = true;
                }
            if (moved) break;
        }
        REQUIRE(moved);
        CHECK(has_violation(validate_schedule(*inst, bad), Violation::Kind::Ineligible));
    }

    SUBCASE("incompleteness and duplicates") {
        Schedule bad = good;
        bad.entries.pop_back();
        CHECK(has_violation(validate_schedule(*inst, bad), Violation::Kind::Incomplete));
        // dropping the most recent assignment leaves a valid partial schedule
        bad.makespan = 0;
        for (const auto& e : bad.entries) bad.makespan = std::max(bad.makespan, e.end);
        CHECK(validate_schedule(*inst, bad, /*require_complete=*/false).ok());

        bad = good;
        bad.entries.push_back(bad.entries.front());
        CHECK(has_violation(validate_schedule(*inst, bad), Violation::Kind::DuplicateOperation));
    }

    SUBCASE("makespan recomputation") {
        Schedule bad = good;
        bad.makespan += 3;
        CHECK(has_violation(validate_schedule(*inst, bad), Violation::Kind::MakespanMismatch));
    }
}

TEST_CASE("gantt identities") {
    SUBCASE("one lane, no vacancy") {
        Schedule s;
        s.entries = {{0, 0, 0, 0, 7}};
        s.makespan = 7;
        const auto j = nlohmann::json::parse(gantt_json(s, 1));
        CHECK(j["busy_total"] == 7);
        CHECK(j["vacancy_total"] == 0);
        CHECK(j["lanes"].size() == 1);
        CHECK(j["lanes"][0]["vacancies"].empty());
    }

    SUBCASE("back-to-back ops") {
        Schedule s;
        s.entries = {{0, 0, 0, 0, 3}, {0, 1, 0, 3, 8}};
        s.makespan = 8;
        const auto j = nlohmann::json::parse(gantt_json(s, 1));
        CHECK(j["busy_total"] == 8);
        CHECK(j["vacancy_total"] == 0);
    }

    SUBCASE("MK01 schedule covers the scheduling area exactly") {
        const auto inst = load_shared(mk_path(1));
        const Schedule schedule = run_rule_pair(inst, JobRule::Lrm, MachineRule::Spt).schedule;
        const auto j = nlohmann::json::parse(gantt_json(schedule, inst->num_machines));
        TimeUnit busy = 0;
        for (const auto& e : schedule.entries) busy += e.end - e.start;
        CHECK(j["busy_total"] == busy);
        CHECK(j["busy_total"].get<TimeUnit>() + j["vacancy_total"].get<TimeUnit>() ==
              static_cast<TimeUnit>(inst->num_machines) * schedule.makespan);
    }
}

TEST_CASE("machine utilization") {
    const auto inst = load_shared(mk_path(1));
    const Schedule schedule = run_rule_pair(inst, JobRule::Mor, MachineRule::Spt).schedule;
    const auto util = machine_utilization(schedule, inst->num_machines);
    REQUIRE(static_cast<int>(util.size()) == inst->num_machines);
    for (double u : util) {
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_SUITE_END();
