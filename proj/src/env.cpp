#include "adt/env.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adt {

void EnvConfig::validate() const {
    if (k < 1) {
        throw std::invalid_argument("state lookback k must be at least 1");
    }
    if (!(alpha >= 0.0) || !(beta >= 0.0)) {
        throw std::invalid_argument("reward weights alpha and beta must be non-negative");
    }
    if (std::abs(alpha + beta - 1.0) > 1e-12) {
        throw std::invalid_argument("reward weights alpha and beta must sum to 1");
    }
}

void ConfusionCounts::add(Label prediction, Label truth) {
    if (prediction) {
        ++(truth ? tp : fp);
    } else {
        ++(truth ? fn : tn);
    }
}

Label classify(double score, Action action) {
    return score > threshold_of(action) ? Label{1} : Label{0};
}

ConfusionCounts tally(std::span<const ClassifiedWindow> recent) {
    ConfusionCounts counts;
    for (const auto& w : recent) {
        counts.add(w.prediction, w.truth);
    }
    return counts;
}

EnvState compute_state(std::span<const ClassifiedWindow> recent, std::size_t k) {
    if (k < 1) {
        throw std::invalid_argument("state lookback k must be at least 1");
    }
    if (recent.size() < k) {
        throw std::invalid_argument("state needs " + std::to_string(k) + " classified windows, got " +
                                    std::to_string(recent.size()));
    }
    const auto last = recent.last(k);
    const auto kd = static_cast<double>(k);

    EnvState s;
    for (const auto& w : last) {
        s.mu += w.score;
    }
    s.mu /= kd;
    if (k > 1) {
        for (const auto& w : last) {
            s.sigma += (w.score - s.mu) * (w.score - s.mu);
        }
        s.sigma /= kd - 1.0;
    }
    const ConfusionCounts c = tally(last);
    s.rho_tp = static_cast<double>(c.tp) / kd;
    s.rho_tn = static_cast<double>(c.tn) / kd;
    s.rho_fp = static_cast<double>(c.fp) / kd;
    s.rho_fn = static_cast<double>(c.fn) / kd;
    return s;
}

double compute_reward(const ConfusionCounts& counts, const EnvConfig& cfg) {
    const auto tp = static_cast<double>(counts.tp);
    const auto tn = static_cast<double>(counts.tn);
    const auto fp = static_cast<double>(counts.fp);
    const auto fn = static_cast<double>(counts.fn);
    return cfg.alpha * (tp - fp - fn) + cfg.beta * tn;
}

ThresholdingEnv::ThresholdingEnv(std::vector<ScoredWindow> segment, EnvConfig cfg)
    : segment_(std::move(segment)), cfg_(cfg) {
    cfg_.validate();
    if (segment_.size() <= cfg_.k) {
        throw std::invalid_argument("episode segment of " + std::to_string(segment_.size()) +
                                    " windows is too short for k = " + std::to_string(cfg_.k));
    }
    for (const auto& w : segment_) {
        if (!(w.score >= 0.0 && w.score <= 1.0)) {
            throw std::invalid_argument("anomaly scores must lie in [0,1]");
        }
    }
    recent_.reserve(cfg_.k + 1);
}

EnvState ThresholdingEnv::reset() {
    recent_.clear();
    for (std::size_t i = 0; i < cfg_.k; ++i) {
        const auto& w = segment_[i];
        recent_.push_back({w.score, w.truth, classify(w.score, Action::passive)});
    }
    cursor_ = cfg_.k;
    started_ = true;
    terminal_ = false;
    return compute_state(recent_, cfg_.k);
}

StepOutcome ThresholdingEnv::step(Action action) {
    if (!started_) {
        throw std::logic_error("environment stepped before reset");
    }
    if (terminal_) {
        throw std::logic_error("environment stepped after the episode ended");
    }
    const auto& w = segment_[cursor_];
    const Label prediction = classify(w.score, action);
    recent_.erase(recent_.begin());
    recent_.push_back({w.score, w.truth, prediction});
    ++cursor_;
    terminal_ = cursor_ == segment_.size();

    StepOutcome out;
    out.counts = tally(recent_);
    out.reward = compute_reward(out.counts, cfg_);
    out.next_state = compute_state(recent_, cfg_.k);
    out.terminal = terminal_;
    out.prediction = prediction;
    return out;
}

} // namespace adt
