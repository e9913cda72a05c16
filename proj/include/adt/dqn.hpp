#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "adt/env.hpp"
#include "adt/nn.hpp"

namespace adt {

struct AgentConfig {
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_min = 0.01;
    double epsilon_decay = 0.999; // multiplicative, once per episode
    std::size_t hold = 1;         // l: actions may change only every `hold` steps
    std::size_t target_copy_interval = 10; // C, in episodes
    std::size_t minibatch = 32;
    std::size_t replay_capacity = 10000;
    std::size_t episodes = 20000; // M
    std::size_t updates_per_episode = 1;
    double learning_rate = 1e-3;
    std::vector<int> hidden{64, 64};
    std::uint64_t seed = 0;

    void validate() const;
};

struct Transition {
    EnvState state;
    Action action = Action::passive;
    double reward = 0.0;
    EnvState next_state;
    bool terminal = false;
};

/// Fixed-capacity FIFO of transitions; the oldest entry is evicted first.
class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity);

    void push(const Transition& t);
    std::size_t size() const { return size_; }
    std::size_t capacity() const { return buffer_.size(); }
    bool empty() const { return size_ == 0; }
    /// i = 0 is the oldest stored transition.
    const Transition& at(std::size_t i) const;

    /// Uniform sample; without replacement when enough transitions are stored,
    /// with replacement otherwise.
    std::vector<Transition> sample(std::size_t count, std::mt19937_64& rng) const;

private:
    std::vector<Transition> buffer_;
    std::size_t head_ = 0; // slot of the oldest entry
    std::size_t size_ = 0;
};

/// y_j = r_j for terminal transitions, r_j + gamma * max_a Q_target(s', a) otherwise.
Eigen::VectorXd compute_targets(std::span<const Transition> batch, const nn::Mlp& target,
                                double gamma);

class DqnAgent {
public:
    /// Q-network 6 -> hidden... -> 2 seeded from cfg.seed; the target starts as a copy.
    explicit DqnAgent(AgentConfig cfg);
    DqnAgent(nn::Mlp q_network, AgentConfig cfg);

    std::array<double, 2> q_values(const EnvState& state) const;
    /// argmax over Q; ties go to Action::active.
    Action greedy(const EnvState& state) const;

    /// Epsilon-greedy at steps where t % hold == 0; otherwise keeps `previous`.
    Action select_action(const EnvState& state, std::size_t t, double epsilon, Action previous,
                         std::mt19937_64& rng) const;

    /// One gradient step on sum_j (y_j - Q(s_j, a_j))^2. Returns the loss before the step.
    double update(std::span<const Transition> batch);
    void sync_target() { target_ = q_; }

    const nn::Mlp& q_network() const { return q_; }
    const nn::Mlp& target_network() const { return target_; }
    const AgentConfig& config() const { return cfg_; }

    void save(const std::filesystem::path& path) const { nn::save_weights(q_, path); }
    static DqnAgent load(const std::filesystem::path& path, AgentConfig cfg);

private:
    AgentConfig cfg_;
    nn::Mlp q_;
    nn::Mlp target_;
    nn::Optimizer optimizer_;
};

struct EpisodeLog {
    std::size_t episode = 0; // 1-based
    double total_reward = 0.0;
    double epsilon = 0.0;    // value used during the episode
    double loss = 0.0;       // minibatch loss of the episode-end update (0 if skipped)
};

struct StepRecord {
    std::size_t episode = 0;
    std::size_t t = 0; // 1-based step within the episode
    Action action = Action::passive;
};

struct TrainingHooks {
    std::function<void(const StepRecord&)> on_step;
    std::function<void(const EpisodeLog&, const DqnAgent&)> on_episode_end;
};

struct TrainingReport {
    std::vector<EpisodeLog> episodes;
    std::size_t transitions_stored = 0;
    std::size_t gradient_updates = 0;
    std::vector<std::size_t> target_copies; // episodes after which the target was synced
};

/// Runs `cfg.episodes` episodes over `env` with episode-end updates.
TrainingReport train(DqnAgent& agent, ThresholdingEnv& env, const TrainingHooks& hooks = {});

struct InferenceTrace {
    std::vector<double> thresholds;
    std::vector<Label> predictions;
};

/// Greedy rollout with hold = 1. The first k windows get the passive threshold.
InferenceTrace infer(const DqnAgent& agent, std::span<const ScoredWindow> windows,
                     const EnvConfig& env_cfg);

} // namespace adt
