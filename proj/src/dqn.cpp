#include "adt/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace adt {

namespace {

constexpr int kActions = 2;

Eigen::VectorXd state_vector(const EnvState& s) {
    const auto f = s.features();
    return Eigen::Map<const Eigen::VectorXd>(f.data(), EnvState::kDim);
}

Eigen::MatrixXd stack_states(std::span<const Transition> batch, bool next) {
    Eigen::MatrixXd x(EnvState::kDim, static_cast<Eigen::Index>(batch.size()));
    for (std::size_t j = 0; j < batch.size(); ++j) {
        x.col(static_cast<Eigen::Index>(j)) = state_vector(next ? batch[j].next_state : batch[j].state);
    }
    return x;
}

nn::Mlp build_q_network(const AgentConfig& cfg) {
    std::vector<int> sizes{EnvState::kDim};
    sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    sizes.push_back(kActions);
    std::mt19937_64 rng(cfg.seed);
    return nn::Mlp(std::move(sizes), nn::OutputActivation::identity, rng);
}

void check_q_network(const nn::Mlp& net) {
    if (net.input_size() != EnvState::kDim || net.output_size() != kActions) {
        throw std::invalid_argument("Q-network must map the 6-element state to 2 action values");
    }
}

} // namespace

void AgentConfig::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("gamma must lie in [0, 1)");
    }
    if (!(epsilon_min > 0.0 && epsilon_min <= epsilon_start && epsilon_start <= 1.0)) {
        throw std::invalid_argument("need 0 < epsilon_min <= epsilon_start <= 1");
    }
    if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) {
        throw std::invalid_argument("epsilon_decay must lie in (0, 1]");
    }
    if (hold < 1) {
        throw std::invalid_argument("action hold period l must be at least 1");
    }
    if (target_copy_interval < 1 || minibatch < 1 || replay_capacity < 1 || episodes < 1) {
        throw std::invalid_argument(
            "target copy interval, minibatch, replay capacity and episodes must be positive");
    }
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("learning rate must be positive");
    }
    for (const int h : hidden) {
        if (h < 1) {
            throw std::invalid_argument("hidden layer sizes must be positive");
        }
    }
}

ReplayMemory::ReplayMemory(std::size_t capacity) {
    if (capacity < 1) {
        throw std::invalid_argument("replay capacity must be positive");
    }
    buffer_.resize(capacity);
}

void ReplayMemory::push(const Transition& t) {
    if (size_ < buffer_.size()) {
        buffer_[(head_ + size_) % buffer_.size()] = t;
        ++size_;
    } else {
        buffer_[head_] = t;
        head_ = (head_ + 1) % buffer_.size();
    }
}

const Transition& ReplayMemory::at(std::size_t i) const {
    if (i >= size_) {
        throw std::out_of_range("replay index out of range");
    }
    return buffer_[(head_ + i) % buffer_.size()];
}

std::vector<Transition> ReplayMemory::sample(std::size_t count, std::mt19937_64& rng) const {
    if (empty()) {
        throw std::logic_error("cannot sample from an empty replay memory");
    }
    std::vector<Transition> out;
    out.reserve(count);
    if (size_ >= count) {
        // Partial Fisher-Yates over indices.
        std::vector<std::size_t> idx(size_);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < count; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, size_ - 1);
            std::swap(idx[i], idx[pick(rng)]);
            out.push_back(at(idx[i]));
        }
    } else {
        std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(at(pick(rng)));
        }
    }
    return out;
}

Eigen::VectorXd compute_targets(std::span<const Transition> batch, const nn::Mlp& target,
                                double gamma) {
    check_q_network(target);
    Eigen::VectorXd y(static_cast<Eigen::Index>(batch.size()));
    if (batch.empty()) {
        return y;
    }
    const Eigen::MatrixXd next_q = target.predict_batch(stack_states(batch, true));
    for (std::size_t j = 0; j < batch.size(); ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        y(col) = batch[j].terminal ? batch[j].reward
                                   : batch[j].reward + gamma * next_q.col(col).maxCoeff();
    }
    return y;
}

DqnAgent::DqnAgent(AgentConfig cfg) : DqnAgent(build_q_network(cfg), cfg) {}

DqnAgent::DqnAgent(nn::Mlp q_network, AgentConfig cfg)
    : cfg_(std::move(cfg)),
      q_(std::move(q_network)),
      target_(q_),
      optimizer_(q_, {nn::Algorithm::adam, cfg_.learning_rate}) {
    cfg_.validate();
    check_q_network(q_);
}

std::array<double, 2> DqnAgent::q_values(const EnvState& state) const {
    const Eigen::VectorXd q = q_.predict(state_vector(state));
    return {q(0), q(1)};
}

Action DqnAgent::greedy(const EnvState& state) const {
    const auto q = q_values(state);
    return q[1] > q[0] ? Action::passive : Action::active;
}

Action DqnAgent::select_action(const EnvState& state, std::size_t t, double epsilon,
                               Action previous, std::mt19937_64& rng) const {
    if (t % cfg_.hold != 0) {
        return previous;
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
        std::uniform_int_distribution<int> pick(0, kActions - 1);
        return static_cast<Action>(pick(rng));
    }
    return greedy(state);
}

double DqnAgent::update(std::span<const Transition> batch) {
    if (batch.empty()) {
        return 0.0;
    }
    const Eigen::VectorXd y = compute_targets(batch, target_, cfg_.gamma);
    const auto cache = q_.forward(stack_states(batch, false));
    Eigen::MatrixXd out_err = Eigen::MatrixXd::Zero(kActions, static_cast<Eigen::Index>(batch.size()));
    double loss = 0.0;
    for (std::size_t j = 0; j < batch.size(); ++j) {
        const auto col = static_cast<Eigen::Index>(j);
        const int a = index_of(batch[j].action);
        const double diff = cache.output()(a, col) - y(col);
        loss += diff * diff;
        out_err(a, col) = 2.0 * diff;
    }
    if (!std::isfinite(loss)) {
        throw nn::DivergenceError("Q-network loss became non-finite");
    }
    optimizer_.apply(q_, q_.backward(cache, out_err));
    return loss;
}

DqnAgent DqnAgent::load(const std::filesystem::path& path, AgentConfig cfg) {
    return DqnAgent(nn::load_weights(path), std::move(cfg));
}

TrainingReport train(DqnAgent& agent, ThresholdingEnv& env, const TrainingHooks& hooks) {
    const AgentConfig& cfg = agent.config();
    ReplayMemory memory(cfg.replay_capacity);
    std::mt19937_64 rng(cfg.seed ^ 0xD1B54A32D192ED03ULL);
    const std::size_t horizon = env.horizon();

    TrainingReport report;
    report.episodes.reserve(cfg.episodes);
    double epsilon = cfg.epsilon_start;
    for (std::size_t episode = 1; episode <= cfg.episodes; ++episode) {
        EnvState state = env.reset();
        Action previous = Action::passive; // same mode the warm-up used
        double total = 0.0;
        for (std::size_t t = 1; t <= horizon; ++t) {
            const Action action = agent.select_action(state, t, epsilon, previous, rng);
            const StepOutcome out = env.step(action);
            memory.push({state, action, out.reward, out.next_state, out.terminal});
            ++report.transitions_stored;
            total += out.reward;
            if (hooks.on_step) {
                hooks.on_step({episode, t, action});
            }
            state = out.next_state;
            previous = action;
        }

        EpisodeLog log{episode, total, epsilon, 0.0};
        if (!memory.empty()) {
            for (std::size_t u = 0; u < cfg.updates_per_episode; ++u) {
                const auto batch = memory.sample(cfg.minibatch, rng);
                try {
                    log.loss = agent.update(batch);
                } catch (const nn::DivergenceError& e) {
                    throw nn::DivergenceError("DQN training diverged in episode " +
                                              std::to_string(episode) + ": " + e.what());
                }
                ++report.gradient_updates;
            }
        }
        epsilon = std::max(cfg.epsilon_min, epsilon * cfg.epsilon_decay);
        if (episode % cfg.target_copy_interval == 0) {
            agent.sync_target();
            report.target_copies.push_back(episode);
        }
        report.episodes.push_back(log);
        if (hooks.on_episode_end) {
            hooks.on_episode_end(log, agent);
        }
    }
    return report;
}

InferenceTrace infer(const DqnAgent& agent, std::span<const ScoredWindow> windows,
                     const EnvConfig& env_cfg) {
    if (windows.size() < env_cfg.k + 1) {
        throw std::invalid_argument("inference needs at least k + 1 windows");
    }
    ThresholdingEnv env(std::vector<ScoredWindow>(windows.begin(), windows.end()), env_cfg);
    InferenceTrace trace;
    trace.thresholds.reserve(windows.size());
    trace.predictions.reserve(windows.size());
    for (std::size_t i = 0; i < env_cfg.k; ++i) {
        trace.thresholds.push_back(threshold_of(Action::passive));
        trace.predictions.push_back(classify(windows[i].score, Action::passive));
    }
    EnvState state = env.reset();
    while (!env.terminal()) {
        const Action action = agent.greedy(state);
        const StepOutcome out = env.step(action);
        trace.thresholds.push_back(threshold_of(action));
        trace.predictions.push_back(out.prediction);
        state = out.next_state;
    }
    return trace;
}

} // namespace adt
