#pragma once
#include <memory>
#include <vector>

#include "fjsp/dispatch.hpp"
#include "fjsp/simulator.hpp"
#include "fjsp/types.hpp"

namespace fjsp {

using StateVector = std::vector<double>;

struct StepResult {
    StateVector state;
    TimeUnit reward = 0;  // raw signed time units
    bool done = false;
};

// Episodic facade over the simulator: reset, step(action). Agents only ever
// see decision points; the environment runs advance/release in between.
class Environment {
public:
    explicit Environment(std::shared_ptr<const RawInstance> inst);

    StateVector reset();
    StepResult step(Action action);

    bool done() const { return sim_.is_done(); }
    int state_size() const { return 2 * sim_.instance().num_jobs; }
    int num_actions() const { return kNumActions; }
    const Simulation& sim() const { return sim_; }
    Simulation& sim() { return sim_; }

    StateVector encode() const;

private:
    Simulation sim_;
    int max_ops_ = 1;  // normalization constant, fixed at reset
};

}  // namespace fjsp
