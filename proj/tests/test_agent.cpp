#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "fjsp/agent.hpp"
#include "fjsp/errors.hpp"
#include "test_util.hpp"

using namespace fjsp;
using namespace fjsp::testutil;

TEST_SUITE_BEGIN("agent");

TEST_CASE("discounted returns") {
    CHECK(discounted_returns({-7.0}, 0.5) == std::vector<double>{-7.0});
    CHECK(discounted_returns({-3.0, -5.0}, 1.0) == std::vector<double>{-8.0, -5.0});
    const auto r = discounted_returns({-3.0, -5.0}, 0.999);
    CHECK(r[0] == doctest::Approx(-7.995).epsilon(1e-12));
    CHECK(r[1] == -5.0);
}

TEST_CASE("clip behavior") {
    SUBCASE("ratio 2 with positive advantage contributes the clipped 1.2 * A") {
        Mlp actor = Mlp::zeros(2, 2, 2);  // uniform: each prob 0.5
        ActorBatch ab;
        ab.states.push_back({0.0, 0.0});
        ab.actions.push_back(0);
        ab.old_probs.push_back(0.25);  // ratio = 0.5 / 0.25 = 2
        ab.advantages.push_back(1.0);
        Mlp grad = Mlp::zeros(2, 2, 2);
        const double loss = actor_loss_grad(actor, ab, 0.2, grad);
        CHECK(loss == doctest::Approx(-1.2));
        // clipped branch is strictly smaller: no gradient flows
        for (int i = 0; i < grad.param_count(); ++i) CHECK(grad.param_at(i) == 0.0);
    }

    SUBCASE("at ratio 1 the clipped objective equals the unclipped one") {
        Rng rng(21);
        Mlp actor = Mlp::init(6, 6, 12, rng);
        ActorBatch ab;
        for (int i = 0; i < 5; ++i) {
            std::vector<double> state(6);
            for (double& x : state) x = rng.uniform01();
            const auto probs = policy_probs(actor, state);
            const int action = rng.index(12);
            ab.states.push_back(state);
            ab.actions.push_back(action);
            ab.old_probs.push_back(probs[static_cast<size_t>(action)]);  // theta_old = theta
            ab.advantages.push_back(rng.uniform(-2.0, 2.0));
        }
        Mlp g1 = Mlp::zeros(6, 6, 12);
        Mlp g2 = Mlp::zeros(6, 6, 12);
        const double clipped = actor_loss_grad(actor, ab, 0.2, g1);
        const double unclipped = actor_loss_grad(actor, ab, 1e9, g2);
        CHECK(clipped == doctest::Approx(unclipped).epsilon(1e-12));
    }
}

TEST_CASE("PER importance weights recover uniform replay at beta=1") {
    Rng rng(31);
    const std::vector<double> uniform(40, 0.7);
    const PerSample sample = per_sample(uniform, 0.6, 1.0, 16, rng);
    REQUIRE(sample.weights.size() == 16);
    for (double w : sample.weights) CHECK(w == doctest::Approx(1.0));

    // non-uniform priorities at beta=1: rarely sampled items get weight 1 (max)
    std::vector<double> skewed(40, 0.1);
    skewed[0] = 5.0;
    const PerSample s2 = per_sample(skewed, 1.0, 1.0, 16, rng);
    for (double w : s2.weights) {
        CHECK(w > 0.0);
        CHECK(w <= 1.0);
    }
}

TEST_CASE("zero advantages leave the actor untouched") {
    Rng rng(41);
    PpoNets nets;
    nets.actor = Mlp::init(4, 4, 12, rng);
    nets.critic = Mlp::zeros(4, 4, 1);  // value 0 everywhere
    nets.actor_opt = AdamState::for_net(nets.actor);
    nets.critic_opt = AdamState::for_net(nets.critic);
    const Mlp before = nets.actor;

    std::vector<Transition> memory;
    for (int i = 0; i < 6; ++i) {
        Transition t;
        t.state = {0.1 * i, 0.5, 1.0, 0.0};
        t.action = Action{i % 12};
        t.action_prob = 0.5;
        t.discounted_return = 0.0;  // matches the zero critic -> advantage 0
        memory.push_back(t);
    }
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.batch_size = 6;
    cfg.per_rounds = 0;
    Rng update_rng(1);
    ppo_update(memory, nets, cfg, 0.4, update_rng);
    CHECK(nets.actor.w1 == before.w1);
    CHECK(nets.actor.w2 == before.w2);
    CHECK(nets.actor.b1 == before.b1);
    CHECK(nets.actor.b2 == before.b2);
}

TEST_CASE("empty memory is rejected") {
    Rng rng(1);
    PpoNets nets = PpoNets::init(4, 12, rng);
    std::vector<Transition> memory;
    TrainConfig cfg;
    Rng update_rng(2);
    CHECK_THROWS_AS(ppo_update(memory, nets, cfg, 0.4, update_rng), AgentError);
}

TEST_CASE("non-finite losses abort") {
    Rng rng(1);
    PpoNets nets = PpoNets::init(4, 12, rng);
    nets.critic.b2[0] = std::numeric_limits<double>::infinity();
    std::vector<Transition> memory;
    Transition t;
    t.state = {0.1, 0.2, 0.3, 0.4};
    t.action = Action{0};
    t.action_prob = 0.5;
    t.discounted_return = -1.0;
    memory.push_back(t);
    TrainConfig cfg;
    cfg.batch_size = 1;
    Rng update_rng(2);
    CHECK_THROWS_AS(ppo_update(memory, nets, cfg, 0.4, update_rng), AgentError);
}

TEST_CASE("trajectory collection: counts, identity, and serial/parallel equality") {
    const auto inst = load_shared(mk_path(1));
    Rng rng(51);
    const Mlp actor = Mlp::init(2 * inst->num_jobs, 2 * inst->num_jobs, kNumActions, rng);

    const TrajectorySet serial = collect_trajectories(inst, actor, 9, 123, 7, 0.999,
                                                      static_cast<double>(inst->max_op_duration()),
                                                      /*parallel=*/false);
    const TrajectorySet parallel = collect_trajectories(inst, actor, 9, 123, 7, 0.999,
                                                        static_cast<double>(inst->max_op_duration()),
                                                        /*parallel=*/true);

    CHECK(serial.transitions.size() == static_cast<size_t>(9 * inst->total_ops()));
    CHECK(serial.makespans == parallel.makespans);
    REQUIRE(serial.transitions.size() == parallel.transitions.size());
    for (size_t i = 0; i < serial.transitions.size(); ++i) {
        CHECK(serial.transitions[i].state == parallel.transitions[i].state);
        CHECK(serial.transitions[i].action.code == parallel.transitions[i].action.code);
        CHECK(serial.transitions[i].reward == parallel.transitions[i].reward);
        CHECK(serial.transitions[i].action_prob == parallel.transitions[i].action_prob);
        CHECK(serial.transitions[i].discounted_return == parallel.transitions[i].discounted_return);
        CHECK(serial.transitions[i].action_prob > 0.0);
        CHECK(serial.transitions[i].action_prob <= 1.0);
    }
}

TEST_CASE("training is deterministic for a fixed seed") {
    const auto inst = load_shared(mk_path(1));
    TrainConfig cfg;
    cfg.max_episodes = 3;
    cfg.time_limit_seconds = 300.0;

    const TrainResult a = train(inst, cfg, 99);
    const TrainResult b = train(inst, cfg, 99);
    REQUIRE(a.log.size() == b.log.size());
    for (size_t i = 0; i < a.log.size(); ++i) {
        CHECK(a.log[i].mean_makespan == b.log[i].mean_makespan);
        CHECK(a.log[i].best_makespan == b.log[i].best_makespan);
        CHECK(a.log[i].greedy_makespan == b.log[i].greedy_makespan);
        CHECK(a.log[i].actor_loss == b.log[i].actor_loss);
        CHECK(a.log[i].critic_loss == b.log[i].critic_loss);
    }
    CHECK(a.nets.actor.w1 == b.nets.actor.w1);
    CHECK(a.nets.critic.w2 == b.nets.critic.w2);
    CHECK(a.best_schedule.entries == b.best_schedule.entries);

    // collection mode cannot change the numbers
    TrainConfig serial_cfg = cfg;
    serial_cfg.parallel_collection = false;
    const TrainResult c = train(inst, serial_cfg, 99);
    REQUIRE(c.log.size() == a.log.size());
    for (size_t i = 0; i < a.log.size(); ++i) {
        CHECK(c.log[i].mean_makespan == a.log[i].mean_makespan);
        CHECK(c.log[i].actor_loss == a.log[i].actor_loss);
    }
}

TEST_CASE("one-job instance trains to its only makespan") {
    const auto inst = one_job_instance();
    TrainConfig cfg;
    cfg.max_episodes = 3;
    const TrainResult result = train(inst, cfg, 7);
    CHECK(result.best_makespan == 7);
    CHECK(result.best_schedule.entries.size() == 1);
    for (const auto& row : result.log) CHECK(row.mean_makespan == 7.0);
}

TEST_CASE("uniform policy greedy rollout equals constant action 0") {
    const auto inst = load_shared(mk_path(2));
    const Mlp uniform = Mlp::zeros(2 * inst->num_jobs, 2 * inst->num_jobs, kNumActions);
    const EpisodeResult greedy = greedy_rollout(uniform, inst);
    const EpisodeResult fixed = run_fixed_action(inst, Action{0});
    CHECK(greedy.makespan == fixed.makespan);
    CHECK(greedy.schedule.entries == fixed.schedule.entries);
}

TEST_CASE("checkpoints restore bit-identical networks") {
    Rng rng(61);
    PpoNets nets = PpoNets::init(10, kNumActions, rng);
    const std::string path = (std::filesystem::temp_directory_path() / "fjsp_ckpt_test.txt").string();
    save_checkpoint(nets, path);
    const PpoNets loaded = load_checkpoint(path);
    CHECK(loaded.actor.w1 == nets.actor.w1);
    CHECK(loaded.actor.b1 == nets.actor.b1);
    CHECK(loaded.actor.w2 == nets.actor.w2);
    CHECK(loaded.actor.b2 == nets.actor.b2);
    CHECK(loaded.critic.w1 == nets.critic.w1);
    CHECK(loaded.critic.b2 == nets.critic.b2);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_checkpoint("/nonexistent/ckpt.txt"), FormatError);
}

TEST_CASE("convergence log format is stable") {
    std::vector<IterationLog> log(1);
    log[0].iteration = 1;
    log[0].mean_makespan = 46.5;
    log[0].best_makespan = 44;
    log[0].wall_seconds = 0.125;
    log[0].actor_loss = -0.01;
    log[0].critic_loss = 2.5;
    CHECK(convergence_log_csv(log) ==
          "iteration,mean_makespan,best_makespan,wall_seconds,actor_loss,critic_loss\n"
          "1,46.500000,44,0.125,-0.01,2.5\n");
}

TEST_SUITE_END();
