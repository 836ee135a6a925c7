#include "fjsp/env.hpp"

#include "fjsp/errors.hpp"

namespace fjsp {

Environment::Environment(std::shared_ptr<const RawInstance> inst) : sim_(std::move(inst)) {
    max_ops_ = sim_.instance().max_ops_per_job();
}

StateVector Environment::reset() {
    sim_.reset();
    max_ops_ = sim_.instance().max_ops_per_job();
    return encode();
}

StateVector Environment::encode() const {
    const int n = sim_.instance().num_jobs;
    StateVector state(static_cast<size_t>(2 * n));
    for (JobId j = 0; j < n; ++j) {
        state[static_cast<size_t>(j)] = sim_.assignable(j) ? 1.0 : 0.0;
        state[static_cast<size_t>(n + j)] =
            static_cast<double>(sim_.completed_ops(j)) / static_cast<double>(max_ops_);
    }
    return state;
}

StepResult Environment::step(Action action) {
    if (sim_.is_done())
        throw EnvError(EnvError::Kind::EpisodeFinished, "step() called on a finished episode");
    const auto [job_rule, machine_rule] = decode_action(action);
    const JobId job = select_job(job_rule, sim_);
    const MachineId machine = select_machine(machine_rule, sim_, job);
    const TimeUnit reward = sim_.assign_and_settle(job, machine);
    return {encode(), reward, sim_.is_done()};
}

}  // namespace fjsp
