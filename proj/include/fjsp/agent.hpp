#pragma once
#include <memory>
#include <string>
#include <vector>

#include "fjsp/env.hpp"
#include "fjsp/net.hpp"
#include "fjsp/runner.hpp"

namespace fjsp {

struct Transition {
    StateVector state;
    Action action;
    TimeUnit reward = 0;       // raw signed time units
    double action_prob = 0.0;  // probability under the behavior policy
    double discounted_return = 0.0;
    double advantage = 0.0;
    double priority = 0.0;
};

struct TrainConfig {
    int max_episodes = 8000;        // training iterations (N)
    int trajectories_per_iter = 9;  // T
    int epochs = 10;                // K
    int batch_size = 0;             // b; 0 = twice the instance's operation count
    double clip_epsilon = 0.2;
    double gamma = 0.999;
    double lr_actor = 1e-3;
    double lr_critic = 3e-3;
    double per_alpha = 0.6;
    double per_beta_start = 0.4;
    double per_beta_end = 1.0;
    int per_rounds = 1;  // C
    int convergence_window = 30;
    int convergence_min_iters = 2000;
    double time_limit_seconds = 3600.0;
    // Rewards are divided by this before discounting to keep value targets in
    // a range the critic can reach; 0 picks the instance's longest single
    // operation. Raw rewards stay untouched in Transition::reward.
    double reward_scale = 0.0;
    bool parallel_collection = true;
};

struct PpoNets {
    Mlp actor;
    Mlp critic;
    AdamState actor_opt;
    AdamState critic_opt;

    static PpoNets init(int state_size, int num_actions, Rng& rng);
};

// G_t = r_t + gamma * G_{t+1}, terminal G = terminal r.
std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma);

// ---- losses (analytic gradients; finite-difference checked in tests) -------

struct ActorBatch {
    std::vector<StateVector> states;
    std::vector<int> actions;
    std::vector<double> old_probs;
    std::vector<double> advantages;  // used as given; standardize upstream
    std::vector<double> weights;     // importance weights, empty = all ones
};

struct CriticBatch {
    std::vector<StateVector> states;
    std::vector<double> targets;
    std::vector<double> weights;
};

// clipped PPO surrogate, returned as a loss (negated objective); gradient is
// accumulated into `grad`
double actor_loss_grad(const Mlp& actor, const ActorBatch& batch, double clip_epsilon, Mlp& grad);
// weighted mean squared error
double critic_loss_grad(const Mlp& critic, const CriticBatch& batch, Mlp& grad);

// ---- trajectory collection --------------------------------------------------

struct TrajectorySet {
    std::vector<Transition> transitions;  // trajectories concatenated in order
    std::vector<TimeUnit> makespans;      // one per trajectory
    std::vector<Schedule> schedules;
};

// Runs `count` episodes with the frozen actor; per-trajectory RNG streams are
// derived from (seed, iteration, index) so serial and OpenMP collection give
// bit-identical results.
TrajectorySet collect_trajectories(std::shared_ptr<const RawInstance> inst, const Mlp& actor,
                                   int count, std::uint64_t seed, std::uint64_t iteration,
                                   double gamma, double reward_scale, bool parallel);

struct UpdateStats {
    double actor_loss = 0.0;
    double critic_loss = 0.0;
    int batch_passes = 0;
};

struct PerSample {
    std::vector<std::size_t> indices;
    std::vector<double> weights;  // (N * P(i))^-beta, normalized by the batch max
};

// priority-proportional draw (P(i) from priorities^alpha) with importance weights
PerSample per_sample(const std::vector<double>& priorities, double alpha, double beta,
                     std::size_t batch, Rng& rng);

// K epochs of minibatch PPO over the memory, each followed by C rounds of
// priority-proportional resampling with importance weights on both losses.
UpdateStats ppo_update(std::vector<Transition>& memory, PpoNets& nets, const TrainConfig& cfg,
                       double per_beta, Rng& rng);

// ---- training ----------------------------------------------------------------

struct IterationLog {
    int iteration = 0;  // 1-based
    double mean_makespan = 0.0;
    TimeUnit best_makespan = 0;
    double wall_seconds = 0.0;
    double actor_loss = 0.0;
    double critic_loss = 0.0;
    TimeUnit greedy_makespan = 0;  // drives the convergence check
};

struct TrainResult {
    PpoNets nets;
    Schedule best_schedule;
    TimeUnit best_makespan = 0;
    std::vector<IterationLog> log;
    bool converged = false;
    int iterations_run = 0;
};

TrainResult train(std::shared_ptr<const RawInstance> inst, const TrainConfig& cfg,
                  std::uint64_t seed, const std::string& nonfinite_dump_path = "");

// deterministic argmax rollout of a policy
EpisodeResult greedy_rollout(const Mlp& actor, std::shared_ptr<const RawInstance> inst);

// CSV pinned to: iteration,mean_makespan,best_makespan,wall_seconds,actor_loss,critic_loss
std::string convergence_log_csv(const std::vector<IterationLog>& log);

// versioned flat parameter file with a shape header; hexfloat, lossless
void save_checkpoint(const PpoNets& nets, const std::string& path);
PpoNets load_checkpoint(const std::string& path);

}  // namespace fjsp
