#include "adt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace adt {

namespace {

constexpr int kMixtureComponents = 3;

std::vector<std::size_t> segment_lengths(const SynthConfig& cfg, std::mt19937_64& rng) {
    const auto target = static_cast<std::size_t>(std::llround(cfg.anomaly_rate * static_cast<double>(cfg.n)));
    std::vector<std::size_t> lengths;
    if (target == 0) {
        return lengths;
    }
    std::uniform_int_distribution<std::size_t> draw(cfg.min_segment, cfg.max_segment);
    std::size_t total = 0;
    while (total < target) {
        const std::size_t len = draw(rng);
        lengths.push_back(len);
        total += len;
    }
    const std::size_t over = total - target;
    lengths.back() = std::max(cfg.min_segment, lengths.back() - std::min(over, lengths.back()));
    total = 0;
    for (const auto len : lengths) {
        total += len;
    }
    const double rel = std::abs(static_cast<double>(total) - static_cast<double>(target)) /
                       static_cast<double>(target);
    if (rel > 0.2) {
        throw std::invalid_argument("anomaly rate cannot be met within 20% using segments of length " +
                                    std::to_string(cfg.min_segment) + ".." +
                                    std::to_string(cfg.max_segment));
    }
    return lengths;
}

std::vector<std::size_t> random_channels(std::size_t m, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    std::vector<std::size_t> out;
    while (out.empty()) {
        for (std::size_t c = 0; c < m; ++c) {
            if (coin(rng)) {
                out.push_back(c);
            }
        }
    }
    return out;
}

} // namespace

BasePattern parse_base_pattern(const std::string& name) {
    if (name == "sine") {
        return BasePattern::sine;
    }
    if (name == "mixture") {
        return BasePattern::mixture;
    }
    throw std::invalid_argument("unknown base pattern '" + name + "' (expected sine or mixture)");
}

AnomalyKind parse_anomaly_kind(const std::string& name) {
    if (name == "spike") {
        return AnomalyKind::spike;
    }
    if (name == "level_shift") {
        return AnomalyKind::level_shift;
    }
    if (name == "noise_burst") {
        return AnomalyKind::noise_burst;
    }
    throw std::invalid_argument("unknown anomaly kind '" + name +
                                "' (expected spike, level_shift or noise_burst)");
}

std::string to_string(BasePattern p) { return p == BasePattern::sine ? "sine" : "mixture"; }

std::string to_string(AnomalyKind k) {
    switch (k) {
    case AnomalyKind::spike:
        return "spike";
    case AnomalyKind::level_shift:
        return "level_shift";
    case AnomalyKind::noise_burst:
        return "noise_burst";
    }
    return "unknown";
}

void SynthConfig::validate() const {
    if (n < 1 || m < 1) {
        throw std::invalid_argument("synthetic series needs n >= 1 and m >= 1");
    }
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
        throw std::invalid_argument("noise_std must be finite and non-negative");
    }
    if (!(anomaly_rate >= 0.0 && anomaly_rate <= 0.5)) {
        throw std::invalid_argument("anomaly_rate must lie in [0, 0.5]");
    }
    if (min_segment < 1 || max_segment < min_segment) {
        throw std::invalid_argument("segment bounds need 1 <= min_segment <= max_segment");
    }
    if (!(clean_prefix >= 0.0 && clean_prefix < 1.0)) {
        throw std::invalid_argument("clean_prefix must lie in [0, 1)");
    }
    if (anomaly_rate > 0.0 && kinds.empty()) {
        throw std::invalid_argument("a positive anomaly_rate needs at least one anomaly kind");
    }
}

SynthResult generate_detailed(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(cfg.n);
    const auto m = static_cast<Eigen::Index>(cfg.m);

    Matrix clean(n, m);
    for (Eigen::Index c = 0; c < m; ++c) {
        const int components = cfg.base == BasePattern::sine ? 1 : kMixtureComponents;
        std::vector<double> amp;
        std::vector<double> period;
        std::vector<double> phase;
        for (int j = 0; j < components; ++j) {
            amp.push_back(j == 0 ? 1.0 : 0.2 + 0.4 * unit(rng));
            period.push_back(50.0 + 150.0 * unit(rng));
            phase.push_back(2.0 * std::numbers::pi * unit(rng));
        }
        for (Eigen::Index t = 0; t < n; ++t) {
            double v = 0.0;
            for (int j = 0; j < components; ++j) {
                v += amp[j] * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period[j] + phase[j]);
            }
            clean(t, c) = v;
        }
    }

    Matrix values = clean;
    std::normal_distribution<double> noise(0.0, 1.0);
    for (Eigen::Index t = 0; t < n; ++t) {
        for (Eigen::Index c = 0; c < m; ++c) {
            values(t, c) += cfg.noise_std * noise(rng);
        }
    }

    std::vector<Label> labels(cfg.n, 0);
    std::vector<AnomalySegment> segments;
    const auto lengths = segment_lengths(cfg, rng);
    if (!lengths.empty()) {
        const auto prefix = static_cast<std::size_t>(cfg.clean_prefix * static_cast<double>(cfg.n));
        const std::size_t region = cfg.n - prefix;
        const std::size_t strata = lengths.size();
        const std::size_t stratum = region / strata;
        if (stratum < cfg.max_segment + 1) {
            throw std::invalid_argument("anomaly rate too high for the series length and segment bounds");
        }
        std::uniform_int_distribution<std::size_t> pick_kind(0, cfg.kinds.size() - 1);
        for (std::size_t s = 0; s < strata; ++s) {
            const std::size_t len = lengths[s];
            const std::size_t lo = prefix + s * stratum;
            std::uniform_int_distribution<std::size_t> pick_start(lo, lo + stratum - len - 1);
            AnomalySegment seg;
            seg.begin = pick_start(rng);
            seg.end = seg.begin + len;
            seg.kind = cfg.kinds[pick_kind(rng)];
            seg.channels = random_channels(cfg.m, rng);

            const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
            const double shift = (3.0 + 3.0 * unit(rng)) * cfg.noise_std;
            for (const std::size_t ch : seg.channels) {
                const auto c = static_cast<Eigen::Index>(ch);
                for (std::size_t t = seg.begin; t < seg.end; ++t) {
                    const auto r = static_cast<Eigen::Index>(t);
                    switch (seg.kind) {
                    case AnomalyKind::spike:
                        values(r, c) += sign * (5.0 + 5.0 * unit(rng)) * cfg.noise_std;
                        break;
                    case AnomalyKind::level_shift:
                        values(r, c) += sign * shift;
                        break;
                    case AnomalyKind::noise_burst:
                        values(r, c) = clean(r, c) + 4.0 * cfg.noise_std * noise(rng);
                        break;
                    }
                }
            }
            std::fill(labels.begin() + static_cast<std::ptrdiff_t>(seg.begin),
                      labels.begin() + static_cast<std::ptrdiff_t>(seg.end), Label{1});
            segments.push_back(std::move(seg));
        }
    }

    return {TimeSeries(std::move(values), std::move(labels), "synthetic"), std::move(clean),
            std::move(segments)};
}

TimeSeries generate(const SynthConfig& cfg) { return generate_detailed(cfg).series; }

} // namespace adt
