#include "fjsp/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <sstream>

#include "fjsp/errors.hpp"

namespace fjsp {

namespace {
constexpr TimeUnit kNoTime = std::numeric_limits<TimeUnit>::max();
}

Simulation::Simulation(std::shared_ptr<const RawInstance> inst) : inst_(std::move(inst)) {
    total_ops_ = inst_->total_ops();
    reset();
}

void Simulation::reset() {
    const int n = inst_->num_jobs;
    const int m = inst_->num_machines;
    table_ = build_table(*inst_);
    clock_ = 0;
    assignable_.assign(static_cast<size_t>(n), 1);
    in_process_.assign(static_cast<size_t>(n), 0);
    completed_ops_.assign(static_cast<size_t>(n), 0);
    ready_time_.assign(static_cast<size_t>(n), 0);
    next_time_.assign(static_cast<size_t>(m), 0);
    machine_job_.assign(static_cast<size_t>(m), -1);
    machine_stage_.assign(static_cast<size_t>(m), -1);
    area_accumulator_ = 0;
    completed_total_ = 0;
    schedule_.entries.clear();
    schedule_.makespan = 0;
    unused_alt_min_.assign(static_cast<size_t>(n), {});
    for (JobId j = 0; j < n; ++j)
        unused_alt_min_[static_cast<size_t>(j)].assign(static_cast<size_t>(inst_->op_count(j)), 0);
    refresh_waiting_state();
}

// Re-derives the waiting-cell signs and assignable flags from machine
// occupancy (Rule 2 and its reversal). In-process and completed cells are
// never touched here; unreached cells stay untouched via Rule 4 because a
// job's waiting cell is exactly its next unstarted op when it is not busy.
void Simulation::refresh_waiting_state() {
    for (JobId j = 0; j < inst_->num_jobs; ++j) {
        const size_t js = static_cast<size_t>(j);
        if (completed_ops_[js] >= inst_->op_count(j) || in_process_[js]) {
            assignable_[js] = 0;
            continue;
        }
        OpCell& cell = table_.at(j, completed_ops_[js]);
        bool any_idle = false;
        for (int& entry : cell.machine_set) {
            const int machine1 = entry < 0 ? -entry : entry;
            const bool busy = machine_job_[static_cast<size_t>(machine1 - 1)] >= 0;
            entry = busy ? -machine1 : machine1;
            any_idle = any_idle || !busy;
        }
        assignable_[js] = any_idle ? 1 : 0;
    }
}

bool Simulation::any_assignable() const {
    return std::any_of(assignable_.begin(), assignable_.end(), [](char f) { return f != 0; });
}

std::vector<std::pair<MachineId, TimeUnit>> Simulation::idle_candidates(JobId j) const {
    std::vector<std::pair<MachineId, TimeUnit>> out;
    if (completed_ops_[static_cast<size_t>(j)] >= inst_->op_count(j) ||
        in_process_[static_cast<size_t>(j)])
        return out;
    for (const auto& alt : inst_->op(j, next_stage(j))) {
        if (machine_job_[static_cast<size_t>(alt.machine - 1)] < 0)
            out.emplace_back(alt.machine - 1, alt.duration);
    }
    return out;
}

void Simulation::assign(JobId job, MachineId machine) {
    const size_t js = static_cast<size_t>(job);
    if (job < 0 || job >= inst_->num_jobs || !assignable_[js])
        throw SimError(SimError::Kind::JobNotAssignable,
                       "job " + std::to_string(job) + " is not assignable");
    const int machine1 = machine + 1;
    const StageId stage = next_stage(job);
    const TimeUnit duration = inst_->duration_on(job, stage, machine1);
    if (duration < 0)
        throw SimError(SimError::Kind::MachineNotEligible,
                       "machine " + std::to_string(machine) + " cannot process job " +
                           std::to_string(job) + " stage " + std::to_string(stage));
    if (machine_job_[static_cast<size_t>(machine)] >= 0)
        throw SimError(SimError::Kind::MachineBusy,
                       "machine " + std::to_string(machine) + " is occupied");

    TimeUnit unused_best = 0;
    for (const auto& alt : inst_->op(job, stage)) {
        if (alt.machine == machine1 || machine_job_[static_cast<size_t>(alt.machine - 1)] >= 0)
            continue;
        if (unused_best == 0 || alt.duration < unused_best) unused_best = alt.duration;
    }
    unused_alt_min_[js][static_cast<size_t>(stage)] = unused_best;

    // Rule 1: the cell collapses to the selected machine, negated, with the
    // full processing time remaining.
    OpCell& cell = table_.at(job, stage);
    cell.machine_set.assign(1, -machine1);
    cell.remaining_time_set.assign(1, duration);

    next_time_[static_cast<size_t>(machine)] = clock_ + duration;
    machine_job_[static_cast<size_t>(machine)] = job;
    machine_stage_[static_cast<size_t>(machine)] = stage;
    in_process_[js] = 1;

    schedule_.entries.push_back({job, stage, machine, clock_, clock_ + duration});

    area_accumulator_ -= duration;

    // Rule 2 for every waiting job that lists this machine, plus this job's
    // own flag, all via one occupancy-driven refresh.
    refresh_waiting_state();
}

TimeUnit Simulation::advance_time() {
    // min / second-smallest-distinct over busy machines only; idle machines
    // always sit exactly at the clock, so they cannot drive it.
    TimeUnit min_busy = kNoTime;
    TimeUnit second_busy = kNoTime;
    for (size_t m = 0; m < next_time_.size(); ++m) {
        if (machine_job_[m] < 0) continue;
        const TimeUnit t = next_time_[m];
        if (t < min_busy) {
            if (min_busy < second_busy && min_busy > t) second_busy = min_busy;
            min_busy = t;
        } else if (t > min_busy && t < second_busy) {
            second_busy = t;
        }
    }
    if (min_busy == kNoTime)
        throw SimError(SimError::Kind::DeadlockDetected,
                       "no busy machine while work remains and nothing is assignable");

    const TimeUnit old_clock = clock_;
    if (clock_ < min_busy)
        clock_ = min_busy;
    else
        clock_ = second_busy == kNoTime ? min_busy : second_busy;
    const TimeUnit elapsed = clock_ - old_clock;

    for (size_t m = 0; m < next_time_.size(); ++m) {
        const TimeUnit lag = clock_ - next_time_[m];
        if (lag > 0) {
            // idle machine dragged to the clock; the gap is vacancy
            next_time_[m] += lag;
            area_accumulator_ -= lag;
        } else if (machine_job_[m] >= 0) {
            // Rule 1: in-process remaining time decreases as time advances
            OpCell& cell = table_.at(machine_job_[m], machine_stage_[m]);
            cell.remaining_time_set[0] = next_time_[m] - clock_;
        }
    }
    return elapsed;
}

std::vector<Release> Simulation::release_machines() {
    std::vector<Release> released;
    for (size_t m = 0; m < next_time_.size(); ++m) {
        const JobId job = machine_job_[m];
        if (job < 0 || next_time_[m] != clock_) continue;

        // Rule 3: completed cell keeps the negated machine with zero time
        OpCell& cell = table_.at(job, machine_stage_[m]);
        cell.remaining_time_set[0] = 0;

        machine_job_[m] = -1;
        machine_stage_[m] = -1;
        in_process_[static_cast<size_t>(job)] = 0;
        completed_ops_[static_cast<size_t>(job)] += 1;
        completed_total_ += 1;
        ready_time_[static_cast<size_t>(job)] = clock_;
        released.push_back({static_cast<MachineId>(m), job});
    }
    if (!released.empty()) {
        refresh_waiting_state();
        if (is_done()) schedule_.makespan = clock_;
    }
    return released;
}

TimeUnit Simulation::collect_reward() {
    const TimeUnit reward = area_accumulator_;
    area_accumulator_ = 0;
    return reward;
}

TimeUnit Simulation::assign_and_settle(JobId job, MachineId machine) {
    assign(job, machine);
    while (!is_done() && !any_assignable()) {
        advance_time();
        release_machines();
    }
    return collect_reward();
}

TimeUnit Simulation::makespan() const {
    if (!is_done())
        throw SimError(SimError::Kind::MakespanBeforeCompletion,
                       "makespan queried before all operations completed");
    return schedule_.makespan;
}

void Simulation::check_invariants() const {
    auto fail = [](const std::string& what) { throw Error("invariant violated: " + what); };

    for (JobId j = 0; j < inst_->num_jobs; ++j) {
        const size_t js = static_cast<size_t>(j);
        const int done = completed_ops_[js];
        if (done < 0 || done > inst_->op_count(j)) fail("completed_op_of_job out of range");
        for (StageId s = 0; s < inst_->op_count(j); ++s) {
            const OpCell& cell = table_.at(j, s);
            if (cell.machine_set.size() != cell.remaining_time_set.size())
                fail("machine_set / remaining_time_set size mismatch");
            for (int e : cell.machine_set)
                if (e == 0) fail("zero machine index in cell");
            if (s < done) {
                // completed: single negative entry, zero remaining
                if (cell.machine_set.size() != 1 || cell.machine_set[0] >= 0 ||
                    cell.remaining_time_set[0] != 0)
                    fail("completed cell not in Rule 3 form");
            } else if (s == done && in_process_[js]) {
                if (cell.machine_set.size() != 1 || cell.machine_set[0] >= 0)
                    fail("in-process cell not in Rule 1 form");
                if (cell.remaining_time_set[0] < 0) fail("negative remaining time");
            } else if (s == done) {
                bool any_idle = false;
                for (size_t i = 0; i < cell.machine_set.size(); ++i) {
                    const int machine1 = std::abs(cell.machine_set[i]);
                    const bool busy = machine_job_[static_cast<size_t>(machine1 - 1)] >= 0;
                    if ((cell.machine_set[i] < 0) != busy)
                        fail("waiting cell sign does not match machine occupancy");
                    any_idle = any_idle || !busy;
                }
                const bool flag = assignable_[js] != 0;
                if (flag != any_idle) fail("assignable flag inconsistent with idle candidates");
            }
        }
        if (assignable_[js] && (in_process_[js] || done >= inst_->op_count(j)))
            fail("assignable job that is busy or finished");
    }
    for (size_t m = 0; m < next_time_.size(); ++m) {
        if (machine_job_[m] >= 0 && next_time_[m] < clock_)
            fail("busy machine left behind the clock");
        if (machine_job_[m] >= 0 && !in_process_[static_cast<size_t>(machine_job_[m])])
            fail("machine holds a job that is not in process");
    }
}

// ---- snapshot ---------------------------------------------------------------

namespace {
constexpr const char* kSnapshotMagic = "fjsp-snapshot";
constexpr int kSnapshotVersion = 1;
}  // namespace

std::string Simulation::snapshot() const {
    std::ostringstream out;
    out << kSnapshotMagic << ' ' << kSnapshotVersion << '\n';
    out << "instance " << inst_->name << '\n';
    out << serialize_instance(*inst_);
    out << "clock " << clock_ << '\n';
    out << "area " << area_accumulator_ << '\n';
    out << "jobs";
    for (JobId j = 0; j < inst_->num_jobs; ++j) {
        out << ' ' << int(assignable_[static_cast<size_t>(j)]) << ' '
            << int(in_process_[static_cast<size_t>(j)]) << ' '
            << completed_ops_[static_cast<size_t>(j)] << ' ' << ready_time_[static_cast<size_t>(j)];
    }
    out << '\n';
    out << "machines";
    for (size_t m = 0; m < next_time_.size(); ++m)
        out << ' ' << next_time_[m] << ' ' << machine_job_[m] << ' ' << machine_stage_[m];
    out << '\n';
    out << "table\n";
    for (JobId j = 0; j < inst_->num_jobs; ++j) {
        for (StageId s = 0; s < inst_->op_count(j); ++s) {
            const OpCell& cell = table_.at(j, s);
            out << cell.machine_set.size();
            for (size_t i = 0; i < cell.machine_set.size(); ++i)
                out << ' ' << cell.machine_set[i] << ' ' << cell.remaining_time_set[i];
            out << '\n';
        }
    }
    out << "dispatched";
    for (JobId j = 0; j < inst_->num_jobs; ++j)
        for (StageId s = 0; s < inst_->op_count(j); ++s)
            out << ' ' << unused_alt_min_[static_cast<size_t>(j)][static_cast<size_t>(s)];
    out << '\n';
    out << "schedule " << schedule_.entries.size() << '\n';
    for (const auto& e : schedule_.entries)
        out << e.job << ' ' << e.stage << ' ' << e.machine << ' ' << e.start << ' ' << e.end << '\n';
    return out.str();
}

Simulation Simulation::restore(const std::string& text) {
    std::istringstream in(text);
    return restore(in);
}

Simulation Simulation::restore(std::istream& in) {
    auto corrupt = [](const std::string& what) {
        throw SnapshotError(SnapshotError::Kind::Corrupt, "bad snapshot: " + what);
    };

    std::string magic;
    int version = -1;
    if (!(in >> magic >> version)) corrupt("missing header");
    if (magic != kSnapshotMagic || version != kSnapshotVersion)
        throw SnapshotError(SnapshotError::Kind::VersionMismatch,
                            "unsupported snapshot header '" + magic + " " +
                                std::to_string(version) + "'");

    std::string key, name;
    if (!(in >> key) || key != "instance") corrupt("expected instance section");
    std::getline(in, name);
    if (!name.empty() && name.front() == ' ') name.erase(0, 1);

    RawInstance inst;
    {
        // instance body: header line + one line per job
        std::string line;
        std::ostringstream body;
        if (!std::getline(in, line)) corrupt("missing instance header");
        body << line << '\n';
        std::istringstream header(line);
        int num_jobs = 0, num_machines = 0;
        if (!(header >> num_jobs >> num_machines)) corrupt("bad instance header");
        for (int j = 0; j < num_jobs; ++j) {
            if (!std::getline(in, line)) corrupt("truncated instance body");
            body << line << '\n';
        }
        inst = parse_instance(body.str(), name);
    }

    Simulation sim(std::make_shared<RawInstance>(std::move(inst)));
    if (!(in >> key >> sim.clock_) || key != "clock") corrupt("expected clock");
    if (!(in >> key >> sim.area_accumulator_) || key != "area") corrupt("expected area");

    if (!(in >> key) || key != "jobs") corrupt("expected jobs");
    sim.completed_total_ = 0;
    for (JobId j = 0; j < sim.inst_->num_jobs; ++j) {
        int assignable = 0, busy = 0;
        if (!(in >> assignable >> busy >> sim.completed_ops_[static_cast<size_t>(j)] >>
              sim.ready_time_[static_cast<size_t>(j)]))
            corrupt("truncated job state");
        sim.assignable_[static_cast<size_t>(j)] = static_cast<char>(assignable);
        sim.in_process_[static_cast<size_t>(j)] = static_cast<char>(busy);
        sim.completed_total_ += sim.completed_ops_[static_cast<size_t>(j)];
    }

    if (!(in >> key) || key != "machines") corrupt("expected machines");
    for (size_t m = 0; m < sim.next_time_.size(); ++m)
        if (!(in >> sim.next_time_[m] >> sim.machine_job_[m] >> sim.machine_stage_[m]))
            corrupt("truncated machine state");

    if (!(in >> key) || key != "table") corrupt("expected table");
    for (JobId j = 0; j < sim.inst_->num_jobs; ++j) {
        for (StageId s = 0; s < sim.inst_->op_count(j); ++s) {
            size_t n = 0;
            if (!(in >> n)) corrupt("truncated table");
            OpCell& cell = sim.table_.at(j, s);
            cell.machine_set.resize(n);
            cell.remaining_time_set.resize(n);
            for (size_t i = 0; i < n; ++i)
                if (!(in >> cell.machine_set[i] >> cell.remaining_time_set[i]))
                    corrupt("truncated table cell");
        }
    }

    if (!(in >> key) || key != "dispatched") corrupt("expected dispatched");
    for (JobId j = 0; j < sim.inst_->num_jobs; ++j)
        for (StageId s = 0; s < sim.inst_->op_count(j); ++s)
            if (!(in >> sim.unused_alt_min_[static_cast<size_t>(j)][static_cast<size_t>(s)]))
                corrupt("truncated dispatch info");

    size_t entry_count = 0;
    if (!(in >> key >> entry_count) || key != "schedule") corrupt("expected schedule");
    sim.schedule_.entries.resize(entry_count);
    for (auto& e : sim.schedule_.entries)
        if (!(in >> e.job >> e.stage >> e.machine >> e.start >> e.end))
            corrupt("truncated schedule entry");
    if (sim.is_done()) sim.schedule_.makespan = sim.clock_;

    sim.check_invariants();
    return sim;
}

}  // namespace fjsp
