#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adt/env.hpp"

namespace adt {

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Precision, recall and F1 with two conventions that make the function total:
/// TP = FP = FN = 0 gives (1,1,1); TP = 0 with FP or FN > 0 gives (0,0,0).
Metrics metrics(const ConfusionCounts& counts);

ConfusionCounts count_confusion(std::span<const Label> predictions, std::span<const Label> truths);

struct DetectionResult {
    std::vector<Label> predictions;
    std::vector<Label> truths;
    ConfusionCounts counts;
    Metrics metrics;
};

DetectionResult evaluate_run(std::span<const Label> predictions, std::span<const Label> truths);

struct SubsetResult {
    std::size_t begin = 0;
    std::size_t end = 0;
    ConfusionCounts counts;
    Metrics metrics;
};

struct RobustnessReport {
    std::vector<SubsetResult> subsets;
    Metrics mean;
    Metrics stddev; // population standard deviation
};

/// Contiguous split into `n_subsets` equal parts; the remainder goes to the last part.
RobustnessReport subset_robustness(std::span<const Label> predictions, std::span<const Label> truths,
                                   std::size_t n_subsets = 10);

std::vector<double> f1_values(const RobustnessReport& report);

struct WilcoxonResult {
    double statistic = 0.0; // min(W+, W-)
    double w_plus = 0.0;
    double w_minus = 0.0;
    std::size_t n = 0; // pairs left after dropping zero differences
    double p_value = 1.0;
};

/// Signed-rank test on paired samples with average ranks for tied magnitudes
/// and an exact two-tailed p-value (2 * smaller tail, capped at 1).
WilcoxonResult wilcoxon_two_tailed(std::span<const double> sample_a, std::span<const double> sample_b);

} // namespace adt
