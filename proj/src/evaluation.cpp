#include "adt/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace adt {

Metrics metrics(const ConfusionCounts& c) {
    if (c.tp == 0) {
        if (c.fp == 0 && c.fn == 0) {
            return {1.0, 1.0, 1.0};
        }
        return {0.0, 0.0, 0.0};
    }
    const auto tp = static_cast<double>(c.tp);
    const double p = tp / (tp + static_cast<double>(c.fp));
    const double r = tp / (tp + static_cast<double>(c.fn));
    return {p, r, 2.0 * p * r / (p + r)};
}

ConfusionCounts count_confusion(std::span<const Label> predictions, std::span<const Label> truths) {
    if (predictions.size() != truths.size()) {
        throw std::invalid_argument("prediction and truth sequences differ in length (" +
                                    std::to_string(predictions.size()) + " vs " +
                                    std::to_string(truths.size()) + ")");
    }
    ConfusionCounts counts;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        counts.add(predictions[i], truths[i]);
    }
    return counts;
}

DetectionResult evaluate_run(std::span<const Label> predictions, std::span<const Label> truths) {
    DetectionResult r;
    r.counts = count_confusion(predictions, truths);
    r.metrics = metrics(r.counts);
    r.predictions.assign(predictions.begin(), predictions.end());
    r.truths.assign(truths.begin(), truths.end());
    return r;
}

RobustnessReport subset_robustness(std::span<const Label> predictions, std::span<const Label> truths,
                                   std::size_t n_subsets) {
    if (predictions.size() != truths.size()) {
        throw std::invalid_argument("prediction and truth sequences differ in length");
    }
    if (n_subsets < 1 || predictions.size() < n_subsets) {
        throw std::invalid_argument("sequence of length " + std::to_string(predictions.size()) +
                                    " cannot be split into " + std::to_string(n_subsets) +
                                    " subsets");
    }
    const std::size_t base = predictions.size() / n_subsets;
    RobustnessReport report;
    for (std::size_t s = 0; s < n_subsets; ++s) {
        SubsetResult sub;
        sub.begin = s * base;
        sub.end = s + 1 == n_subsets ? predictions.size() : (s + 1) * base;
        sub.counts = count_confusion(predictions.subspan(sub.begin, sub.end - sub.begin),
                                     truths.subspan(sub.begin, sub.end - sub.begin));
        sub.metrics = metrics(sub.counts);
        report.subsets.push_back(sub);
    }

    const auto n = static_cast<double>(n_subsets);
    auto summarize = [&](auto field) {
        double mean = 0.0;
        for (const auto& s : report.subsets) {
            mean += field(s.metrics);
        }
        mean /= n;
        double var = 0.0;
        for (const auto& s : report.subsets) {
            const double d = field(s.metrics) - mean;
            var += d * d;
        }
        return std::pair{mean, std::sqrt(var / n)};
    };
    std::tie(report.mean.precision, report.stddev.precision) =
        summarize([](const Metrics& m) { return m.precision; });
    std::tie(report.mean.recall, report.stddev.recall) =
        summarize([](const Metrics& m) { return m.recall; });
    std::tie(report.mean.f1, report.stddev.f1) = summarize([](const Metrics& m) { return m.f1; });
    return report;
}

std::vector<double> f1_values(const RobustnessReport& report) {
    std::vector<double> out;
    for (const auto& s : report.subsets) {
        out.push_back(s.metrics.f1);
    }
    return out;
}

WilcoxonResult wilcoxon_two_tailed(std::span<const double> sample_a, std::span<const double> sample_b) {
    if (sample_a.size() != sample_b.size()) {
        throw std::invalid_argument("Wilcoxon test needs paired samples of equal length");
    }
    std::vector<double> diffs;
    for (std::size_t i = 0; i < sample_a.size(); ++i) {
        const double d = sample_a[i] - sample_b[i];
        if (!std::isfinite(d)) {
            throw std::invalid_argument("Wilcoxon test needs finite samples");
        }
        if (d != 0.0) {
            diffs.push_back(d);
        }
    }
    const std::size_t n = diffs.size();
    if (n == 0) {
        throw std::invalid_argument("Wilcoxon test undefined: all paired differences are zero");
    }
    if (n > 60) {
        throw std::invalid_argument("exact Wilcoxon enumeration supports at most 60 pairs");
    }

    // Doubled average ranks of |d| are integers, which keeps the null distribution exact.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return std::abs(diffs[i]) < std::abs(diffs[j]); });
    std::vector<std::uint64_t> rank2(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) {
            ++j;
        }
        // positions i..j share rank ((i+1) + (j+1)) / 2
        const std::uint64_t doubled = (i + 1) + (j + 1);
        for (std::size_t p = i; p <= j; ++p) {
            rank2[order[p]] = doubled;
        }
        i = j + 1;
    }

    std::uint64_t plus2 = 0;
    std::uint64_t total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total2 += rank2[i];
        if (diffs[i] > 0.0) {
            plus2 += rank2[i];
        }
    }

    // counts[s] = number of sign assignments whose doubled positive rank sum is s
    std::vector<std::uint64_t> counts(total2 + 1, 0);
    counts[0] = 1;
    std::uint64_t reach = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint64_t s = reach + 1; s-- > 0;) {
            if (counts[s]) {
                counts[s + rank2[i]] += counts[s];
            }
        }
        reach += rank2[i];
    }
    std::uint64_t at_most = 0;
    std::uint64_t at_least = 0;
    for (std::uint64_t s = 0; s <= total2; ++s) {
        if (s <= plus2) {
            at_most += counts[s];
        }
        if (s >= plus2) {
            at_least += counts[s];
        }
    }

    WilcoxonResult r;
    r.n = n;
    r.w_plus = static_cast<double>(plus2) / 2.0;
    r.w_minus = static_cast<double>(total2 - plus2) / 2.0;
    r.statistic = std::min(r.w_plus, r.w_minus);
    const double tail = static_cast<double>(std::min(at_most, at_least));
    r.p_value = std::min(1.0, 2.0 * tail / std::ldexp(1.0, static_cast<int>(n)));
    return r;
}

} // namespace adt
