#pragma once
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fjsp/errors.hpp"
#include "fjsp/types.hpp"

namespace fjsp {

// One (machine, duration) alternative of an operation. Machine ids are
// 1-based here, exactly as they appear in the benchmark files.
struct Alternative {
    int machine;  // 1-based
    TimeUnit duration;

    bool operator==(const Alternative&) const = default;
};

using Operation = std::vector<Alternative>;

struct RawInstance {
    std::string name;
    int num_jobs = 0;
    int num_machines = 0;
    std::optional<double> avg_machines_per_op;  // optional third header value
    std::vector<std::vector<Operation>> jobs;

    int op_count(JobId j) const { return static_cast<int>(jobs[static_cast<size_t>(j)].size()); }
    int total_ops() const;
    int max_ops_per_job() const;
    TimeUnit total_work() const;  // sum of every alternative duration
    TimeUnit max_op_duration() const;

    const Operation& op(JobId j, StageId s) const {
        return jobs[static_cast<size_t>(j)][static_cast<size_t>(s)];
    }

    // duration of (j,s) on the given 1-based machine; negative if not eligible
    TimeUnit duration_on(JobId j, StageId s, int machine1) const;

    bool operator==(const RawInstance&) const = default;
};

// Parses the standard flexible job-shop benchmark text:
//   header: num_jobs num_machines [avg machines per op]
//   then per job: op_count { alt_count { machine duration } ... } ...
// Tokens may wrap or share lines; blank lines and trailing whitespace are fine.
RawInstance parse_instance(std::istream& in, const std::string& name = "");
RawInstance parse_instance(const std::string& text, const std::string& name = "");
RawInstance load_instance(const std::string& path);

// Canonical one-job-per-line serialization; parse(serialize(x)) == x.
std::string serialize_instance(const RawInstance& inst);

// The 2D state table: one cell per (job, stage). machine_set entries are
// signed 1-based indices; the sign carries the occupied/free/completed state,
// remaining_time_set is aligned 1:1 with machine_set.
struct OpCell {
    std::vector<int> machine_set;
    std::vector<TimeUnit> remaining_time_set;

    bool operator==(const OpCell&) const = default;
};

struct OpTable {
    std::vector<std::vector<OpCell>> cells;  // [job][stage]

    OpCell& at(JobId j, StageId s) { return cells[static_cast<size_t>(j)][static_cast<size_t>(s)]; }
    const OpCell& at(JobId j, StageId s) const {
        return cells[static_cast<size_t>(j)][static_cast<size_t>(s)];
    }
    int row_size(JobId j) const { return static_cast<int>(cells[static_cast<size_t>(j)].size()); }

    TimeUnit total_remaining() const;

    bool operator==(const OpTable&) const = default;
};

OpTable build_table(const RawInstance& inst);

}  // namespace fjsp
