#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "adt/autoencoder.hpp"

namespace adt {

/// The two threshold modes; the numeric value is the threshold itself.
enum class Action : int { active = 0, passive = 1 };

inline double threshold_of(Action a) { return a == Action::active ? 0.0 : 1.0; }
inline int index_of(Action a) { return static_cast<int>(a); }

struct EnvConfig {
    std::size_t k = 2;
    double alpha = 0.9;
    double beta = 0.1;

    /// Throws std::invalid_argument unless k >= 1, alpha, beta >= 0 and alpha + beta = 1.
    void validate() const;
};

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + tn + fp + fn; }
    void add(Label prediction, Label truth);
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct EnvState {
    double mu = 0.0;
    double sigma = 0.0; // sample variance of the last k scores
    double rho_tp = 0.0;
    double rho_tn = 0.0;
    double rho_fp = 0.0;
    double rho_fn = 0.0;

    static constexpr int kDim = 6;
    std::array<double, kDim> features() const { return {mu, sigma, rho_tp, rho_tn, rho_fp, rho_fn}; }
};

/// A window after classification, as seen by the state.
struct ClassifiedWindow {
    double score = 0.0;
    Label truth = 0;
    Label prediction = 0;
};

struct StepOutcome {
    EnvState next_state;
    double reward = 0.0;
    bool terminal = false;
    Label prediction = 0;
    ConfusionCounts counts; // tally the reward was computed on
};

/// 1 iff score > threshold (strict).
Label classify(double score, Action action);

EnvState compute_state(std::span<const ClassifiedWindow> recent, std::size_t k);
ConfusionCounts tally(std::span<const ClassifiedWindow> recent);
double compute_reward(const ConfusionCounts& counts, const EnvConfig& cfg);

/// Replays a scored window segment as an episode.
class ThresholdingEnv {
public:
    ThresholdingEnv(std::vector<ScoredWindow> segment, EnvConfig cfg);

    /// Classifies the first k windows passively and returns the state over them.
    EnvState reset();
    StepOutcome step(Action action);

    bool terminal() const { return terminal_; }
    /// Steps per episode (segment length - k).
    std::size_t horizon() const { return segment_.size() - cfg_.k; }
    /// Index of the window the next step classifies.
    std::size_t cursor() const { return cursor_; }
    const EnvConfig& config() const { return cfg_; }
    const std::vector<ScoredWindow>& segment() const { return segment_; }

private:
    std::vector<ScoredWindow> segment_;
    EnvConfig cfg_;
    std::vector<ClassifiedWindow> recent_; // last k classified windows, oldest first
    std::size_t cursor_ = 0;
    bool started_ = false;
    bool terminal_ = false;
};

} // namespace adt
