#include <doctest.h>

#include <filesystem>
#include <random>

#include "adt/dqn.hpp"
#include "oracles.hpp"

using namespace adt;

namespace {

Transition transition(double reward, bool terminal, double mu = 0.0) {
    Transition t;
    t.state.mu = mu;
    t.next_state.mu = mu;
    t.reward = reward;
    t.terminal = terminal;
    t.action = Action::active;
    return t;
}

/// Linear Q-network whose outputs are the given constants for every state.
nn::Mlp constant_q(double q0, double q1) {
    nn::Mlp net({EnvState::kDim, 2}, nn::OutputActivation::identity);
    net.layer(0).bias << q0, q1;
    return net;
}

std::vector<ScoredWindow> toy_segment() {
    std::vector<ScoredWindow> seg;
    const std::vector<Label> truth{0, 0, 1, 1, 1, 0, 0, 0, 0, 0};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        seg.push_back({i, truth[i] ? 0.9 : 0.1, truth[i]});
    }
    return seg;
}

std::vector<ScoredWindow> random_segment(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ScoredWindow> seg;
    for (std::size_t i = 0; i < n; ++i) {
        seg.push_back({i, u(rng), static_cast<Label>(u(rng) < 0.3)});
    }
    return seg;
}

} // namespace

TEST_CASE("replay memory evicts oldest first and stays bounded") {
    ReplayMemory mem(4);
    for (int i = 0; i < 7; ++i) {
        mem.push(transition(i, false));
        CHECK(mem.size() <= 4);
    }
    CHECK(mem.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(mem.at(i).reward == static_cast<double>(3 + i));
    }
}

TEST_CASE("replay sampling without replacement when enough is stored") {
    ReplayMemory mem(100);
    for (int i = 0; i < 40; ++i) {
        mem.push(transition(i, false));
    }
    std::mt19937_64 rng(1);
    const auto batch = mem.sample(32, rng);
    std::set<double> seen;
    for (const auto& t : batch) {
        seen.insert(t.reward);
    }
    CHECK(seen.size() == 32);

    ReplayMemory small(10);
    small.push(transition(1, false));
    small.push(transition(2, false));
    CHECK(small.sample(32, rng).size() == 32);
    CHECK_THROWS_AS(ReplayMemory(5).sample(1, rng), std::logic_error);
}

TEST_CASE("held steps keep the previous action") {
    AgentConfig cfg;
    cfg.hold = 10;
    const DqnAgent agent(constant_q(5.0, 0.0), cfg);
    std::mt19937_64 rng(3);
    for (const double eps : {0.0, 0.5, 1.0}) {
        CHECK(agent.select_action({}, 7, eps, Action::passive, rng) == Action::passive);
    }
}

TEST_CASE("greedy picks the larger value and breaks ties toward active") {
    AgentConfig cfg;
    std::mt19937_64 rng(3);
    CHECK(DqnAgent(constant_q(0.2, 0.9), cfg).select_action({}, 1, 0.0, Action::active, rng) ==
          Action::passive);
    CHECK(DqnAgent(constant_q(0.4, 0.4), cfg).greedy({}) == Action::active);
}

TEST_CASE("full exploration is uniform over both actions") {
    const DqnAgent agent(constant_q(1.0, 0.0), AgentConfig{});
    std::mt19937_64 rng(2024);
    int passive = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        passive += agent.select_action({}, 1, 1.0, Action::active, rng) == Action::passive;
    }
    CHECK(std::abs(passive - draws / 2) <= 150); // 3 sigma
}

TEST_CASE("bootstrap targets") {
    const nn::Mlp target = constant_q(2.0, 1.0);
    const std::vector<Transition> batch{transition(1.0, true), transition(0.0, false)};
    const auto y = compute_targets(batch, target, 0.99);
    CHECK(y(0) == 1.0);
    CHECK(y(1) == doctest::Approx(1.98).epsilon(1e-15));
    const std::vector<Transition> one{transition(0.7, false)};
    CHECK(compute_targets(one, target, 0.0)(0) == 0.7);
}

TEST_CASE("one episode stores T transitions and makes one update") {
    AgentConfig cfg;
    cfg.episodes = 1;
    DqnAgent agent(cfg);
    ThresholdingEnv env(random_segment(6, 1), {1, 0.9, 0.1});
    const auto report = train(agent, env);
    CHECK(report.transitions_stored == 5);
    CHECK(report.gradient_updates == 1);
    REQUIRE(report.episodes.size() == 1);
    CHECK(report.episodes[0].epsilon == 1.0);
}

TEST_CASE("target copies follow the interval and stay frozen between copies") {
    AgentConfig cfg;
    cfg.episodes = 35;
    cfg.target_copy_interval = 10;
    DqnAgent agent(cfg);
    ThresholdingEnv env(random_segment(12, 2), {2, 0.9, 0.1});
    nn::Mlp last_copy = agent.q_network();
    bool frozen = true;
    TrainingHooks hooks;
    hooks.on_episode_end = [&](const EpisodeLog& log, const DqnAgent& a) {
        if (log.episode % 10 == 0) {
            last_copy = a.q_network();
        }
        frozen = frozen && a.target_network() == last_copy;
    };
    const auto report = train(agent, env, hooks);
    CHECK(report.target_copies == std::vector<std::size_t>{10, 20, 30});
    CHECK(report.gradient_updates == 35);
    CHECK(frozen);
}

TEST_CASE("actions only change on hold boundaries") {
    AgentConfig cfg;
    cfg.episodes = 20;
    cfg.hold = 3;
    DqnAgent agent(cfg);
    ThresholdingEnv env(random_segment(30, 3), {2, 0.9, 0.1});
    Action previous = Action::passive;
    bool ok = true;
    TrainingHooks hooks;
    hooks.on_step = [&](const StepRecord& r) {
        if (r.t == 1) {
            previous = Action::passive;
        }
        if (r.t % 3 != 0 && r.action != previous) {
            ok = false;
        }
        previous = r.action;
    };
    train(agent, env, hooks);
    CHECK(ok);
}

TEST_CASE("epsilon decays once per episode down to its floor") {
    AgentConfig cfg;
    cfg.episodes = 30;
    cfg.epsilon_decay = 0.8;
    cfg.epsilon_min = 0.05;
    DqnAgent agent(cfg);
    ThresholdingEnv env(random_segment(5, 4), {1, 0.9, 0.1});
    const auto report = train(agent, env);
    double eps = 1.0;
    for (const auto& log : report.episodes) {
        CHECK(log.epsilon == eps);
        eps = std::max(0.05, eps * 0.8);
    }
}

TEST_CASE("inference with tied values flags every positive score") {
    const DqnAgent agent(constant_q(0.0, 0.0), AgentConfig{});
    auto seg = random_segment(20, 5);
    seg[10].score = 0.0;
    const auto trace = infer(agent, seg, {2, 0.9, 0.1});
    REQUIRE(trace.predictions.size() == seg.size());
    CHECK(trace.thresholds[0] == 1.0);
    CHECK(trace.thresholds[1] == 1.0);
    for (std::size_t i = 2; i < seg.size(); ++i) {
        CHECK(trace.thresholds[i] == 0.0);
        CHECK(trace.predictions[i] == (seg[i].score > 0.0 ? 1 : 0));
    }
}

TEST_CASE("passive policy flags nothing") {
    const DqnAgent agent(constant_q(0.0, 1.0), AgentConfig{});
    const auto seg = random_segment(50, 6);
    const auto trace = infer(agent, seg, {2, 0.9, 0.1});
    for (const auto p : trace.predictions) {
        CHECK(p == 0);
    }
    CHECK_THROWS_AS(infer(agent, std::span(seg).first(2), {2, 0.9, 0.1}), std::invalid_argument);
}

TEST_CASE("greedy inference is deterministic") {
    AgentConfig cfg;
    cfg.seed = 77;
    const DqnAgent agent(cfg);
    const auto seg = random_segment(200, 7);
    const auto a = infer(agent, seg, {2, 0.9, 0.1});
    const auto b = infer(agent, seg, {2, 0.9, 0.1});
    CHECK(a.thresholds == b.thresholds);
    CHECK(a.predictions == b.predictions);
}

TEST_CASE("agent weights round trip") {
    AgentConfig cfg;
    cfg.seed = 9;
    const DqnAgent agent(cfg);
    const auto path = std::filesystem::temp_directory_path() / "adt_dqn_roundtrip.bin";
    agent.save(path);
    const auto back = DqnAgent::load(path, cfg);
    CHECK(back.q_network() == agent.q_network());
    std::filesystem::remove(path);
}

TEST_CASE("no state-feedback policy reaches the open-loop optimum on the toy segment") {
    const auto seg = toy_segment();
    const EnvConfig env_cfg{1, 0.9, 0.1};
    const double open_loop = oracle::enumerate_best_reward(seg, env_cfg);
    const double closed_loop = oracle::best_state_feedback_reward(seg, env_cfg);
    CHECK(open_loop == doctest::Approx(3.3).epsilon(1e-12));
    CHECK(closed_loop == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("trained agent reaches the best state-feedback reward on the toy segment") {
    const auto seg = toy_segment();
    const EnvConfig env_cfg{1, 0.9, 0.1};
    AgentConfig cfg;
    cfg.episodes = 1000;
    cfg.epsilon_decay = 0.995;
    cfg.seed = 31;
    DqnAgent agent(cfg);
    ThresholdingEnv env(seg, env_cfg);
    train(agent, env);

    ThresholdingEnv eval(seg, env_cfg);
    auto state = eval.reset();
    double total = 0.0;
    while (!eval.terminal()) {
        const auto out = eval.step(agent.greedy(state));
        total += out.reward;
        state = out.next_state;
    }
    const double best = oracle::best_state_feedback_reward(seg, env_cfg);
    CHECK(std::abs(total - best) <= 0.05 * std::abs(best));
}
