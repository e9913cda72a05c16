#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "adt/env.hpp"
#include "adt/nn.hpp"

namespace adt::oracle {

/// Max relative error between analytic backprop and central differences of
/// L = sum (net(x) - y)^2 over a batch.
inline double gradient_check(const nn::Mlp& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                             double step = 1e-5) {
    auto loss = [&](const nn::Mlp& n) { return (n.predict_batch(x) - y).squaredNorm(); };
    const auto cache = net.forward(x);
    const nn::Gradients g = net.backward(cache, 2.0 * (cache.output() - y));
    std::vector<double> analytic;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        for (Eigen::Index j = 0; j < g.weight[l].cols(); ++j) {
            for (Eigen::Index i = 0; i < g.weight[l].rows(); ++i) {
                analytic.push_back(g.weight[l](i, j));
            }
        }
        for (Eigen::Index i = 0; i < g.bias[l].size(); ++i) {
            analytic.push_back(g.bias[l](i));
        }
    }
    const std::vector<double> base = net.parameters();
    double worst = 0.0;
    nn::Mlp probe = net;
    for (std::size_t p = 0; p < base.size(); ++p) {
        auto params = base;
        params[p] = base[p] + step;
        probe.set_parameters(params);
        const double up = loss(probe);
        params[p] = base[p] - step;
        probe.set_parameters(params);
        const double down = loss(probe);
        const double numeric = (up - down) / (2.0 * step);
        const double denom = std::max({std::abs(numeric), std::abs(analytic[p]), 1e-6});
        worst = std::max(worst, std::abs(numeric - analytic[p]) / denom);
    }
    return worst;
}

/// Replays an action sequence through the environment and returns the total reward.
inline double episode_reward(const std::vector<ScoredWindow>& segment, const EnvConfig& cfg,
                             const std::vector<Action>& actions) {
    ThresholdingEnv env(segment, cfg);
    env.reset();
    double total = 0.0;
    for (const Action a : actions) {
        total += env.step(a).reward;
    }
    return total;
}

/// Best total reward over every open-loop action sequence (2^T of them).
inline double enumerate_best_reward(const std::vector<ScoredWindow>& segment, const EnvConfig& cfg) {
    const std::size_t horizon = segment.size() - cfg.k;
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << horizon); ++mask) {
        std::vector<Action> actions(horizon);
        for (std::size_t t = 0; t < horizon; ++t) {
            actions[t] = (mask >> t) & 1U ? Action::passive : Action::active;
        }
        best = std::max(best, episode_reward(segment, cfg, actions));
    }
    return best;
}

namespace detail {

inline void feedback_search(ThresholdingEnv env, EnvState state, double total,
                            std::vector<std::pair<std::array<double, 6>, Action>>& policy,
                            double& best) {
    if (env.terminal()) {
        best = std::max(best, total);
        return;
    }
    const auto key = state.features();
    for (const auto& [seen, action] : policy) {
        if (seen == key) {
            const StepOutcome out = env.step(action);
            feedback_search(env, out.next_state, total + out.reward, policy, best);
            return;
        }
    }
    for (const Action a : {Action::active, Action::passive}) {
        policy.emplace_back(key, a);
        ThresholdingEnv branch = env;
        const StepOutcome out = branch.step(a);
        feedback_search(branch, out.next_state, total + out.reward, policy, best);
        policy.pop_back();
    }
}

} // namespace detail

/// Best total reward over every deterministic policy that maps the observed
/// state to an action (closed loop), found by branching on each newly seen state.
inline double best_state_feedback_reward(const std::vector<ScoredWindow>& segment, const EnvConfig& cfg) {
    ThresholdingEnv env(segment, cfg);
    const EnvState s0 = env.reset();
    std::vector<std::pair<std::array<double, 6>, Action>> policy;
    double best = -std::numeric_limits<double>::infinity();
    detail::feedback_search(env, s0, 0.0, policy, best);
    return best;
}

/// Labels-driven policy: active on anomalous windows, passive on normal ones.
inline std::vector<Action> label_policy(const std::vector<ScoredWindow>& segment, std::size_t k) {
    std::vector<Action> actions;
    for (std::size_t i = k; i < segment.size(); ++i) {
        actions.push_back(segment[i].truth ? Action::active : Action::passive);
    }
    return actions;
}

/// F1 under `score > threshold` by direct counting.
inline double f1_at(std::span<const double> scores, std::span<const Label> truths, double threshold) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] > threshold;
        tp += pred && truths[i];
        fp += pred && !truths[i];
        fn += !pred && truths[i];
    }
    if (tp == 0) {
        return fp == 0 && fn == 0 ? 1.0 : 0.0;
    }
    const double p = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double r = static_cast<double>(tp) / static_cast<double>(tp + fn);
    return 2.0 * p * r / (p + r);
}

/// Maximum F1 over every score value, a point below all scores, and midpoints.
inline double best_static_f1(std::span<const double> scores, std::span<const Label> truths) {
    std::set<double> cuts(scores.begin(), scores.end());
    std::vector<double> sorted(cuts.begin(), cuts.end());
    double best = f1_at(scores, truths, sorted.front() - 1.0);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        best = std::max(best, f1_at(scores, truths, sorted[i]));
        if (i + 1 < sorted.size()) {
            best = std::max(best, f1_at(scores, truths, 0.5 * (sorted[i] + sorted[i + 1])));
        }
    }
    return best;
}

/// Exact two-tailed signed-rank p-value by listing all 2^n sign patterns.
inline double wilcoxon_enumerated_p(std::span<const double> a, std::span<const double> b) {
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            d.push_back(a[i] - b[i]);
        }
    }
    const std::size_t n = d.size();
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n; ++i) {
        double less = 0.0, equal = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            less += std::abs(d[j]) < std::abs(d[i]);
            equal += std::abs(d[j]) == std::abs(d[i]);
        }
        ranks[i] = less + (equal + 1.0) / 2.0;
    }
    double observed = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        observed += d[i] > 0 ? ranks[i] : 0.0;
    }
    std::uint64_t le = 0, ge = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1U) {
                w += ranks[i];
            }
        }
        le += w <= observed;
        ge += w >= observed;
    }
    return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / std::ldexp(1.0, static_cast<int>(n)));
}

/// Inverse-CDF draws from GPD(gamma, sigma).
inline std::vector<double> sample_gpd(double gamma, double sigma, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> out(n);
    for (auto& x : out) {
        const double v = 1.0 - u(rng); // (0, 1]
        x = gamma == 0.0 ? -sigma * std::log(v) : sigma / gamma * (std::pow(v, -gamma) - 1.0);
    }
    return out;
}

} // namespace adt::oracle
