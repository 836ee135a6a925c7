#include "fjsp/agent.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "fjsp/errors.hpp"

namespace fjsp {

PpoNets PpoNets::init(int state_size, int num_actions, Rng& rng) {
    PpoNets nets;
    nets.actor = Mlp::init(state_size, state_size, num_actions, rng);
    nets.critic = Mlp::init(state_size, state_size, 1, rng);
    nets.actor_opt = AdamState::for_net(nets.actor);
    nets.critic_opt = AdamState::for_net(nets.critic);
    return nets;
}

std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma) {
    std::vector<double> returns(rewards.size());
    double tail = 0.0;
    for (size_t i = rewards.size(); i-- > 0;) {
        tail = rewards[i] + gamma * tail;
        returns[i] = tail;
    }
    return returns;
}

double actor_loss_grad(const Mlp& actor, const ActorBatch& batch, double clip_epsilon, Mlp& grad) {
    const size_t n = batch.states.size();
    if (n == 0) throw AgentError(AgentError::Kind::EmptyMemory, "empty actor batch");
    const double inv_n = 1.0 / static_cast<double>(n);
    double loss = 0.0;
    FwdCache cache;
    std::vector<double> d_logits(static_cast<size_t>(actor.out));
    for (size_t i = 0; i < n; ++i) {
        forward(actor, batch.states[i], cache);
        const std::vector<double> probs = softmax(cache.output);
        const int a = batch.actions[i];
        const double w = batch.weights.empty() ? 1.0 : batch.weights[i];
        const double adv = batch.advantages[i];
        const double ratio = probs[static_cast<size_t>(a)] / batch.old_probs[i];
        const double clipped = std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
        const double surr = ratio * adv;
        const double surr_clip = clipped * adv;
        loss -= w * inv_n * std::min(surr, surr_clip);
        // d min / d ratio is adv on the unclipped branch and 0 when the
        // clipped branch is strictly smaller (ratio outside the clip range)
        if (surr <= surr_clip) {
            const double coeff = -w * inv_n * adv * ratio;
            for (int k = 0; k < actor.out; ++k) {
                const double indicator = k == a ? 1.0 : 0.0;
                d_logits[static_cast<size_t>(k)] = coeff * (indicator - probs[static_cast<size_t>(k)]);
            }
            backward(actor, cache, d_logits, grad);
        }
    }
    return loss;
}

double critic_loss_grad(const Mlp& critic, const CriticBatch& batch, Mlp& grad) {
    const size_t n = batch.states.size();
    if (n == 0) throw AgentError(AgentError::Kind::EmptyMemory, "empty critic batch");
    const double inv_n = 1.0 / static_cast<double>(n);
    double loss = 0.0;
    FwdCache cache;
    double d_output[1];
    for (size_t i = 0; i < n; ++i) {
        forward(critic, batch.states[i], cache);
        const double w = batch.weights.empty() ? 1.0 : batch.weights[i];
        const double err = batch.targets[i] - cache.output[0];
        loss += w * inv_n * err * err;
        d_output[0] = -2.0 * w * inv_n * err;
        backward(critic, cache, d_output, grad);
    }
    return loss;
}

namespace {

Transition make_transition(StateVector state, int action, TimeUnit reward, double prob) {
    Transition t;
    t.state = std::move(state);
    t.action = Action{action};
    t.reward = reward;
    t.action_prob = prob;
    return t;
}

struct TrajectoryBuffer {
    std::vector<Transition> transitions;
    TimeUnit makespan = 0;
    Schedule schedule;
};

TrajectoryBuffer run_one_trajectory(const std::shared_ptr<const RawInstance>& inst,
                                    const Mlp& actor, std::uint64_t stream_seed, double gamma,
                                    double reward_scale) {
    Rng rng(stream_seed);
    Environment env(inst);
    StateVector state = env.reset();
    TrajectoryBuffer buffer;
    buffer.transitions.reserve(static_cast<size_t>(inst->total_ops()));
    TimeUnit reward_sum = 0;
    while (!env.done()) {
        const std::vector<double> probs = policy_probs(actor, state);
        const int action = rng.categorical(probs);
        StepResult step = env.step(Action{action});
        reward_sum += step.reward;
        buffer.transitions.push_back(
            make_transition(std::move(state), action, step.reward, probs[static_cast<size_t>(action)]));
        state = std::move(step.state);
    }
    buffer.makespan = env.sim().makespan();
    buffer.schedule = env.sim().schedule();

    const TimeUnit expected = -static_cast<TimeUnit>(inst->num_machines) * buffer.makespan;
    if (reward_sum != expected)
        throw Error("reward identity violated during collection: sum " +
                    std::to_string(reward_sum) + " != " + std::to_string(expected));

    std::vector<double> scaled(buffer.transitions.size());
    for (size_t i = 0; i < scaled.size(); ++i)
        scaled[i] = static_cast<double>(buffer.transitions[i].reward) / reward_scale;
    const std::vector<double> returns = discounted_returns(scaled, gamma);
    for (size_t i = 0; i < returns.size(); ++i)
        buffer.transitions[i].discounted_return = returns[i];
    return buffer;
}

}  // namespace

TrajectorySet collect_trajectories(std::shared_ptr<const RawInstance> inst, const Mlp& actor,
                                   int count, std::uint64_t seed, std::uint64_t iteration,
                                   double gamma, double reward_scale, bool parallel) {
    std::vector<TrajectoryBuffer> buffers(static_cast<size_t>(count));
    const std::uint64_t base = iteration * static_cast<std::uint64_t>(count);

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < count; ++t)
            buffers[static_cast<size_t>(t)] = run_one_trajectory(
                inst, actor, Rng::derive_seed(seed, base + static_cast<std::uint64_t>(t)), gamma,
                reward_scale);
    } else {
        for (int t = 0; t < count; ++t)
            buffers[static_cast<size_t>(t)] = run_one_trajectory(
                inst, actor, Rng::derive_seed(seed, base + static_cast<std::uint64_t>(t)), gamma,
                reward_scale);
    }

    TrajectorySet set;
    for (auto& buffer : buffers) {
        set.makespans.push_back(buffer.makespan);
        set.schedules.push_back(std::move(buffer.schedule));
        for (auto& tr : buffer.transitions) set.transitions.push_back(std::move(tr));
    }
    return set;
}

namespace {

void standardize(std::vector<double>& values) {
    if (values.empty()) return;
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double stddev = std::sqrt(var / n);
    for (double& v : values) v = (v - mean) / (stddev + 1e-8);
}

struct BatchView {
    ActorBatch actor;
    CriticBatch critic;
};

BatchView gather_batch(const std::vector<Transition>& memory, const std::vector<size_t>& indices,
                       const std::vector<double>& weights) {
    BatchView view;
    view.actor.states.reserve(indices.size());
    for (size_t idx : indices) {
        const Transition& t = memory[idx];
        view.actor.states.push_back(t.state);
        view.actor.actions.push_back(t.action.code);
        view.actor.old_probs.push_back(t.action_prob);
        view.actor.advantages.push_back(t.advantage);
        view.critic.states.push_back(t.state);
        view.critic.targets.push_back(t.discounted_return);
    }
    standardize(view.actor.advantages);
    view.actor.weights = weights;
    view.critic.weights = weights;
    return view;
}

void check_finite(double loss, const char* which) {
    if (!std::isfinite(loss))
        throw AgentError(AgentError::Kind::NonFiniteLoss,
                         std::string(which) + " loss became non-finite");
}

}  // namespace

PerSample per_sample(const std::vector<double>& priorities, double alpha, double beta,
                     std::size_t batch, Rng& rng) {
    const size_t n = priorities.size();
    std::vector<double> probs(n);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        probs[i] = std::pow(priorities[i], alpha);
        total += probs[i];
    }
    PerSample out;
    out.indices.resize(batch);
    out.weights.resize(batch);
    double max_weight = 0.0;
    for (size_t i = 0; i < batch; ++i) {
        const size_t pick = static_cast<size_t>(rng.categorical(probs));
        out.indices[i] = pick;
        out.weights[i] = std::pow(static_cast<double>(n) * probs[pick] / total, -beta);
        max_weight = std::max(max_weight, out.weights[i]);
    }
    for (double& w : out.weights) w /= max_weight;
    return out;
}

UpdateStats ppo_update(std::vector<Transition>& memory, PpoNets& nets, const TrainConfig& cfg,
                       double per_beta, Rng& rng) {
    if (memory.empty())
        throw AgentError(AgentError::Kind::EmptyMemory, "ppo_update on empty memory");

    // advantage against the pre-update critic; priorities follow |A|
    for (Transition& t : memory) {
        t.advantage = t.discounted_return - value_of(nets.critic, t.state);
        t.priority = std::abs(t.advantage) + 1e-6;
    }

    const size_t n = memory.size();
    const size_t batch_size = cfg.batch_size > 0 ? static_cast<size_t>(cfg.batch_size) : n;
    UpdateStats stats;
    Mlp actor_grad = Mlp::zeros(nets.actor.in, nets.actor.hidden, nets.actor.out);
    Mlp critic_grad = Mlp::zeros(nets.critic.in, nets.critic.hidden, nets.critic.out);

    auto optimize = [&](const std::vector<size_t>& indices, const std::vector<double>& weights) {
        BatchView view = gather_batch(memory, indices, weights);
        actor_grad.fill(0.0);
        const double a_loss = actor_loss_grad(nets.actor, view.actor, cfg.clip_epsilon, actor_grad);
        check_finite(a_loss, "actor");
        nets.actor_opt.step(nets.actor, actor_grad, cfg.lr_actor);

        critic_grad.fill(0.0);
        const double c_loss = critic_loss_grad(nets.critic, view.critic, critic_grad);
        check_finite(c_loss, "critic");
        nets.critic_opt.step(nets.critic, critic_grad, cfg.lr_critic);

        for (size_t idx : indices) {
            const Transition& t = memory[idx];
            memory[idx].priority = std::abs(t.advantage) + 1e-6;
        }
        stats.actor_loss += a_loss;
        stats.critic_loss += c_loss;
        stats.batch_passes += 1;
    };

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // even replay over a shuffled split
        rng.shuffle(order);
        for (size_t begin = 0; begin < n; begin += batch_size) {
            const size_t end = std::min(begin + batch_size, n);
            std::vector<size_t> indices(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                        order.begin() + static_cast<std::ptrdiff_t>(end));
            optimize(indices, {});
        }
        // prioritized replay with importance-sampling correction
        for (int round = 0; round < cfg.per_rounds; ++round) {
            std::vector<double> priorities(n);
            for (size_t i = 0; i < n; ++i) priorities[i] = memory[i].priority;
            const PerSample sample = per_sample(priorities, cfg.per_alpha, per_beta, batch_size, rng);
            optimize(sample.indices, sample.weights);
        }
    }

    if (stats.batch_passes > 0) {
        stats.actor_loss /= stats.batch_passes;
        stats.critic_loss /= stats.batch_passes;
    }
    return stats;
}

EpisodeResult greedy_rollout(const Mlp& actor, std::shared_ptr<const RawInstance> inst) {
    Environment env(std::move(inst));
    StateVector state = env.reset();
    EpisodeResult result;
    while (!env.done()) {
        const std::vector<double> probs = policy_probs(actor, state);
        const int action = static_cast<int>(
            std::max_element(probs.begin(), probs.end()) - probs.begin());
        StepResult step = env.step(Action{action});
        result.rewards.push_back(step.reward);
        result.reward_total += step.reward;
        state = std::move(step.state);
    }
    result.schedule = env.sim().schedule();
    result.makespan = env.sim().makespan();
    return result;
}

TrainResult train(std::shared_ptr<const RawInstance> inst, const TrainConfig& cfg,
                  std::uint64_t seed, const std::string& nonfinite_dump_path) {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    TrainConfig config = cfg;
    if (config.batch_size <= 0) config.batch_size = 2 * inst->total_ops();
    const double reward_scale = config.reward_scale > 0.0
                                    ? config.reward_scale
                                    : static_cast<double>(inst->max_op_duration());

    Rng init_rng(Rng::derive_seed(seed, 0x5eed0001ULL));
    Rng update_rng(Rng::derive_seed(seed, 0x5eed0002ULL));

    TrainResult result;
    result.nets = PpoNets::init(2 * inst->num_jobs, kNumActions, init_rng);
    result.best_makespan = std::numeric_limits<TimeUnit>::max();

    std::vector<TimeUnit> recent_greedy;
    try {
        for (int iter = 1; iter <= config.max_episodes; ++iter) {
            if (elapsed() > config.time_limit_seconds) break;

            TrajectorySet batch = collect_trajectories(
                inst, result.nets.actor, config.trajectories_per_iter, seed,
                static_cast<std::uint64_t>(iter), config.gamma, reward_scale,
                config.parallel_collection);

            double mean_makespan = 0.0;
            for (size_t t = 0; t < batch.makespans.size(); ++t) {
                mean_makespan += static_cast<double>(batch.makespans[t]);
                if (batch.makespans[t] < result.best_makespan) {
                    result.best_makespan = batch.makespans[t];
                    result.best_schedule = batch.schedules[t];
                }
            }
            mean_makespan /= static_cast<double>(batch.makespans.size());

            const double beta_frac =
                config.max_episodes > 1
                    ? static_cast<double>(iter - 1) / static_cast<double>(config.max_episodes - 1)
                    : 1.0;
            const double per_beta =
                config.per_beta_start + (config.per_beta_end - config.per_beta_start) * beta_frac;

            const UpdateStats stats =
                ppo_update(batch.transitions, result.nets, config, per_beta, update_rng);

            EpisodeResult greedy = greedy_rollout(result.nets.actor, inst);
            if (greedy.makespan < result.best_makespan) {
                result.best_makespan = greedy.makespan;
                result.best_schedule = greedy.schedule;
            }

            IterationLog row;
            row.iteration = iter;
            row.mean_makespan = mean_makespan;
            row.best_makespan = result.best_makespan;
            row.wall_seconds = elapsed();
            row.actor_loss = stats.actor_loss;
            row.critic_loss = stats.critic_loss;
            row.greedy_makespan = greedy.makespan;
            result.log.push_back(row);
            result.iterations_run = iter;

            recent_greedy.push_back(greedy.makespan);
            if (static_cast<int>(recent_greedy.size()) > config.convergence_window)
                recent_greedy.erase(recent_greedy.begin());
            if (iter >= config.convergence_min_iters &&
                static_cast<int>(recent_greedy.size()) == config.convergence_window &&
                std::all_of(recent_greedy.begin(), recent_greedy.end(),
                            [&](TimeUnit m) { return m == recent_greedy.front(); })) {
                result.converged = true;
                break;
            }
        }
    } catch (const AgentError& e) {
        if (e.kind == AgentError::Kind::NonFiniteLoss && !nonfinite_dump_path.empty())
            save_checkpoint(result.nets, nonfinite_dump_path);
        throw;
    }
    return result;
}

std::string convergence_log_csv(const std::vector<IterationLog>& log) {
    std::ostringstream out;
    out << "iteration,mean_makespan,best_makespan,wall_seconds,actor_loss,critic_loss\n";
    char buf[160];
    for (const auto& row : log) {
        std::snprintf(buf, sizeof buf, "%d,%.6f,%lld,%.3f,%.9g,%.9g\n", row.iteration,
                      row.mean_makespan, static_cast<long long>(row.best_makespan),
                      row.wall_seconds, row.actor_loss, row.critic_loss);
        out << buf;
    }
    return out.str();
}

// ---- checkpoint ---------------------------------------------------------------

namespace {
constexpr const char* kCheckpointMagic = "fjsp-checkpoint";
constexpr int kCheckpointVersion = 1;

void write_net(std::ostream& out, const char* label, const Mlp& net) {
    out << label << ' ' << net.in << ' ' << net.hidden << ' ' << net.out << '\n';
    char buf[48];
    const int n = net.param_count();
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%a", net.param_at(i));
        out << buf << (i + 1 == n ? '\n' : ' ');
    }
}

Mlp read_net(std::istream& in, const std::string& expected_label) {
    std::string label;
    int dim_in = 0, dim_hidden = 0, dim_out = 0;
    if (!(in >> label >> dim_in >> dim_hidden >> dim_out) || label != expected_label)
        throw SnapshotError(SnapshotError::Kind::Corrupt,
                            "checkpoint: expected '" + expected_label + "' section");
    Mlp net = Mlp::zeros(dim_in, dim_hidden, dim_out);
    const int n = net.param_count();
    std::string token;
    for (int i = 0; i < n; ++i) {
        if (!(in >> token))
            throw SnapshotError(SnapshotError::Kind::Corrupt, "checkpoint: truncated parameters");
        net.param_at(i) = std::strtod(token.c_str(), nullptr);
    }
    return net;
}
}  // namespace

void save_checkpoint(const PpoNets& nets, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write checkpoint: " + path);
    out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
    write_net(out, "actor", nets.actor);
    write_net(out, "critic", nets.critic);
}

PpoNets load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open checkpoint: " + path);
    std::string magic;
    int version = -1;
    if (!(in >> magic >> version))
        throw SnapshotError(SnapshotError::Kind::Corrupt, "checkpoint: missing header");
    if (magic != kCheckpointMagic || version != kCheckpointVersion)
        throw SnapshotError(SnapshotError::Kind::VersionMismatch,
                            "unsupported checkpoint header '" + magic + " " +
                                std::to_string(version) + "'");
    PpoNets nets;
    nets.actor = read_net(in, "actor");
    nets.critic = read_net(in, "critic");
    nets.actor_opt = AdamState::for_net(nets.actor);
    nets.critic_opt = AdamState::for_net(nets.critic);
    return nets;
}

}  // namespace fjsp
