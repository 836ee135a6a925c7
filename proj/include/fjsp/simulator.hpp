#pragma once
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fjsp/instance.hpp"
#include "fjsp/schedule.hpp"
#include "fjsp/types.hpp"

namespace fjsp {

struct Release {
    MachineId machine;  // 0-based
    JobId job;
};

// Chronological discrete-event engine. One instance of this class owns one
// OpTable and is mutated single-threaded; independent simulations over the
// same RawInstance can run concurrently.
//
// Cell state encoding (sign of the 1-based machine indices):
//   in process  -> single entry, negative, remaining time counts down
//   completed   -> single entry, negative, remaining time 0
//   waiting     -> one entry per alternative; an entry is negative while that
//                  machine is occupied and positive while it is free
//   not reached -> untouched (all positive, original durations)
class Simulation {
public:
    explicit Simulation(std::shared_ptr<const RawInstance> inst);

    void reset();

    // ---- transitions -------------------------------------------------------
    void assign(JobId job, MachineId machine);
    TimeUnit advance_time();                  // returns elapsed time
    std::vector<Release> release_machines();  // frees every machine maturing at T
    TimeUnit collect_reward();                // drains the scheduling-area accumulator

    // assign + advance/release until the next decision point (or completion),
    // then collect the step reward. The common inner loop of every episode.
    TimeUnit assign_and_settle(JobId job, MachineId machine);

    // ---- queries -----------------------------------------------------------
    const RawInstance& instance() const { return *inst_; }
    std::shared_ptr<const RawInstance> instance_ptr() const { return inst_; }
    const OpTable& table() const { return table_; }

    TimeUnit clock() const { return clock_; }
    bool is_done() const { return completed_total_ == total_ops_; }
    TimeUnit makespan() const;  // only valid when done

    bool any_assignable() const;
    const std::vector<char>& assignable_jobs() const { return assignable_; }
    bool assignable(JobId j) const { return assignable_[static_cast<size_t>(j)] != 0; }
    int completed_ops(JobId j) const { return completed_ops_[static_cast<size_t>(j)]; }
    const std::vector<int>& completed_ops() const { return completed_ops_; }
    bool job_in_process(JobId j) const { return in_process_[static_cast<size_t>(j)] != 0; }
    TimeUnit ready_time(JobId j) const { return ready_time_[static_cast<size_t>(j)]; }
    TimeUnit next_time_on_machine(MachineId m) const {
        return next_time_[static_cast<size_t>(m)];
    }
    JobId job_on_machine(MachineId m) const { return machine_job_[static_cast<size_t>(m)]; }
    bool machine_idle(MachineId m) const { return machine_job_[static_cast<size_t>(m)] < 0; }

    // idle machines (0-based) eligible for the job's next operation, with durations
    std::vector<std::pair<MachineId, TimeUnit>> idle_candidates(JobId j) const;

    // Cheapest alternative that was idle but not chosen when (j, s) was
    // dispatched; 0 when the operation had no such alternative. Feeds the
    // FDD/MWKR numerator.
    TimeUnit cheapest_unused_alternative(JobId j, StageId s) const {
        return unused_alt_min_[static_cast<size_t>(j)][static_cast<size_t>(s)];
    }

    const Schedule& schedule() const { return schedule_; }

    // ---- snapshot ----------------------------------------------------------
    // Self-contained versioned text: instance + full engine state + partial
    // schedule. Restoring and replaying the same actions reproduces the run.
    std::string snapshot() const;
    static Simulation restore(const std::string& text);
    static Simulation restore(std::istream& in);

    // verifies every OpTable/SimState invariant; throws Error on violation
    void check_invariants() const;

private:
    void refresh_waiting_state();
    StageId next_stage(JobId j) const { return completed_ops_[static_cast<size_t>(j)]; }

    std::shared_ptr<const RawInstance> inst_;
    OpTable table_;
    int total_ops_ = 0;

    TimeUnit clock_ = 0;
    std::vector<char> assignable_;
    std::vector<char> in_process_;
    std::vector<int> completed_ops_;
    std::vector<TimeUnit> ready_time_;   // completion time of the previous op
    std::vector<TimeUnit> next_time_;    // per machine
    std::vector<JobId> machine_job_;     // -1 when idle
    std::vector<StageId> machine_stage_;
    TimeUnit area_accumulator_ = 0;
    int completed_total_ = 0;
    Schedule schedule_;
    std::vector<std::vector<TimeUnit>> unused_alt_min_;  // [job][stage], set at dispatch
};

}  // namespace fjsp
