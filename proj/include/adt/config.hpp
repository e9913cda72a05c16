#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "adt/autoencoder.hpp"
#include "adt/baselines.hpp"
#include "adt/dqn.hpp"
#include "adt/env.hpp"
#include "adt/synth.hpp"
#include "adt/timeseries.hpp"

namespace adt {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SourceKind { synth, csv };

struct CsvSource {
    std::filesystem::path path;
    /// Optional normal-only recording; when set, the autoencoder trains on it.
    std::optional<std::filesystem::path> normal_path;
    CsvSchema schema;
};

struct DataSource {
    SourceKind kind = SourceKind::synth;
    std::string name = "synthetic";
    SynthConfig synth;
    CsvSource csv;
};

struct SplitConfig {
    double ae_train = 0.2;  // leading fraction of windows, anomalous windows dropped
    double adt_train = 0.05;
};

struct BaselineConfig {
    bool static_enabled = true;
    bool dspot_enabled = true;
    SpotConfig spot;
};

struct ExperimentConfig {
    DataSource data;
    std::size_t tau = 10;
    EnvConfig env;
    AgentConfig agent; // agent.hold is l
    AutoEncoderConfig ae;
    BaselineConfig baselines;
    SplitConfig split;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "results";
    bool report_wall_time = false;
    std::size_t robustness_subsets = 10;
    std::size_t jobs = 1;

    /// Throws ConfigError on invalid values or unresolvable paths.
    void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Unknown keys anywhere in the document are rejected.
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// "a.b.c=value": value parsed as JSON, falling back to a plain string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Defaults, then the optional file, then overrides in order.
ExperimentConfig load_config(const std::optional<std::filesystem::path>& file,
                             const std::vector<std::string>& overrides = {});

} // namespace adt
