#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "adt/evaluation.hpp"

namespace adt {

// ---------------------------------------------------------------------------
// Optimal static threshold

struct StaticThresholdResult {
    double threshold = 0.0;
    ConfusionCounts counts;
    Metrics metrics;
};

/// Candidate cuts: one below the minimum score, midpoints between consecutive
/// distinct scores, one above the maximum. Ascending.
std::vector<double> static_threshold_candidates(std::span<const double> scores);

/// Exhaustive search for the F1-maximizing threshold under `score > threshold`.
/// Ties go to the smallest threshold.
StaticThresholdResult optimal_static_threshold(std::span<const double> scores,
                                               std::span<const Label> truths);

std::vector<Label> apply_threshold(std::span<const double> scores, double threshold);

// ---------------------------------------------------------------------------
// Generalized Pareto fit (peaks over threshold)

class DegenerateTailError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class GpdMethod { grimshaw, exponential, moments };

struct GpdFit {
    double gamma = 0.0; // shape
    double sigma = 1.0; // scale
    double log_likelihood = 0.0;
    GpdMethod method = GpdMethod::grimshaw;
};

double gpd_log_likelihood(std::span<const double> excesses, double gamma, double sigma);

/// Maximum likelihood via Grimshaw's reduction to a scalar root search;
/// method-of-moments is used when no admissible root is found.
GpdFit fit_gpd(std::span<const double> excesses);

/// Tail quantile z with P(X > z) = q, given `n_tail` of `n_seen` observations above u.
double pot_quantile(double init_threshold, double gamma, double sigma, double q,
                    std::size_t n_seen, std::size_t n_tail);

// ---------------------------------------------------------------------------
// DSPOT: streaming peaks-over-threshold with moving-average drift removal

struct SpotConfig {
    double q = 1e-3;
    std::size_t depth = 10;       // d; 0 disables drift correction
    double init_quantile = 0.98;  // level of the initial threshold u
};

struct SpotState {
    double q = 1e-3;
    double init_threshold = 0.0;  // u
    std::vector<double> excesses; // peaks above u, minus u
    double gpd_gamma = 0.0;
    double gpd_sigma = 1.0;
    double z_q = 0.0;             // alarm level on the drift-corrected scale
    std::size_t n_seen = 0;
    std::size_t n_tail = 0;
    std::size_t depth = 0;
    std::deque<double> drift_buffer;

    double drift_mean() const;
};

SpotState dspot_init(std::span<const double> initial_scores, const SpotConfig& cfg);

struct SpotStep {
    Label alarm = 0;
    double threshold = 0.0; // z_q + drift mean, on the raw score scale
};

SpotStep dspot_step(SpotState& state, double score);

struct ThresholdTrace {
    std::vector<double> thresholds;
    std::vector<Label> predictions;
};

/// Calibrates on `calibration` and streams over `scores`.
ThresholdTrace run_dspot(std::span<const double> calibration, std::span<const double> scores,
                         const SpotConfig& cfg);

} // namespace adt
