#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "adt/timeseries.hpp"

namespace adt {

enum class BasePattern { sine, mixture };
enum class AnomalyKind { spike, level_shift, noise_burst };

BasePattern parse_base_pattern(const std::string& name);
AnomalyKind parse_anomaly_kind(const std::string& name);
std::string to_string(BasePattern p);
std::string to_string(AnomalyKind k);

struct SynthConfig {
    std::size_t n = 20000;
    std::size_t m = 1;
    BasePattern base = BasePattern::sine;
    double noise_std = 0.05;
    double anomaly_rate = 0.05;
    std::vector<AnomalyKind> kinds{AnomalyKind::spike, AnomalyKind::level_shift,
                                   AnomalyKind::noise_burst};
    std::size_t min_segment = 20;
    std::size_t max_segment = 60;
    double clean_prefix = 0.2; // leading fraction kept free of anomalies
    std::uint64_t seed = 0;

    void validate() const;
};

struct AnomalySegment {
    std::size_t begin = 0;
    std::size_t end = 0; // exclusive
    AnomalyKind kind = AnomalyKind::spike;
    std::vector<std::size_t> channels;
};

struct SynthResult {
    TimeSeries series;
    Matrix clean; // base signal without noise or anomalies
    std::vector<AnomalySegment> segments;
};

SynthResult generate_detailed(const SynthConfig& cfg);
TimeSeries generate(const SynthConfig& cfg);

} // namespace adt
