#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adt/autoencoder.hpp"
#include "adt/baselines.hpp"
#include "adt/config.hpp"
#include "adt/dqn.hpp"
#include "adt/evaluation.hpp"

namespace adt {

/// A failure tagged with the workflow phase it happened in.
class PhaseError : public std::runtime_error {
public:
    PhaseError(std::string phase, const std::string& message);
    const std::string& phase() const { return phase_; }

private:
    std::string phase_;
};

struct PreparedData {
    std::string dataset;
    WindowSequence ae_train; // normal windows only
    WindowSequence adt_train;
    WindowSequence test;
    MinMaxRecord record;
};

/// Loads or generates the series, normalizes it and splits the windows.
PreparedData prepare_data(const ExperimentConfig& cfg);

/// Trains the autoencoder and fits its normalizer on the ADT-training errors.
AutoEncoder train_scorer(const ExperimentConfig& cfg, const PreparedData& data,
                         AeTrainingLog* log = nullptr);

struct ScoredSplits {
    std::vector<ScoredWindow> adt_train;
    std::vector<ScoredWindow> test;
};

ScoredSplits score_splits(const AutoEncoder& ae, const PreparedData& data);

struct AdtTraining {
    DqnAgent agent;
    TrainingReport report;
    double train_ms = 0.0;
};

AdtTraining train_adt(const ExperimentConfig& cfg, std::span<const ScoredWindow> adt_train);

struct MethodRun {
    std::string method;
    std::vector<double> thresholds;
    DetectionResult result;
    double wall_ms = 0.0;
};

MethodRun detect_adt(const DqnAgent& agent, const EnvConfig& env, std::span<const ScoredWindow> test);
/// Best fixed threshold chosen with the test labels.
MethodRun detect_static(std::span<const ScoredWindow> test);
MethodRun detect_dspot(const SpotConfig& cfg, std::span<const ScoredWindow> calibration,
                       std::span<const ScoredWindow> test);

/// ADT plus the enabled baselines on the same score stream.
std::vector<MethodRun> detect_all(const ExperimentConfig& cfg, const DqnAgent& agent,
                                  const ScoredSplits& scores);

struct RunResult {
    std::string dataset;
    ScoredSplits scores;
    std::vector<MethodRun> methods;
    TrainingReport training;
    double train_ms = 0.0;

    const MethodRun& method(const std::string& name) const;
};

/// All four phases; writes results.csv, trace_<method>.csv, training_log.csv,
/// threshold_trace.svg and training_reward.svg into cfg.output_dir.
RunResult run_pipeline(const ExperimentConfig& cfg);

struct WilcoxonEntry {
    std::string baseline;
    std::optional<WilcoxonResult> result; // empty when every paired difference is zero
};

struct BenchmarkResult {
    RunResult run;
    std::vector<std::pair<std::string, RobustnessReport>> robustness;
    std::vector<WilcoxonEntry> wilcoxon; // ADT against each baseline, on subset F1
};

/// Pipeline plus robustness.csv and wilcoxon.csv.
BenchmarkResult run_benchmark(const ExperimentConfig& cfg);

enum class SweepParam { l, k, alpha_beta, adt_train };
SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam p);

/// Returns a copy of `cfg` with the parameter set; alpha_beta sets alpha and beta = 1 - alpha.
ExperimentConfig with_param(const ExperimentConfig& cfg, SweepParam param, double value);

struct SweepPoint {
    double value = 0.0;
    std::uint64_t seed = 0;
    Metrics metrics;
    double train_ms = 0.0;
};

/// One run per value with seed + index, cfg.jobs at a time; writes sweep.csv and sweep.svg.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, SweepParam param,
                                  const std::vector<double>& values);

/// Score line with anomalous spans shaded and the threshold overlaid.
void plot_threshold_trace(const std::filesystem::path& trace_csv, const std::filesystem::path& svg_out);

// Output helpers

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string results_csv(const RunResult& run, bool wall_time);
std::string trace_csv(std::span<const ScoredWindow> test, const MethodRun& run);
std::string training_log_csv(const TrainingReport& report);
std::string training_reward_svg(const TrainingReport& report, std::size_t smoothing = 30);
std::string robustness_csv(const BenchmarkResult& bench);
std::string wilcoxon_csv(const BenchmarkResult& bench);

void write_training_outputs(const std::filesystem::path& dir, const TrainingReport& report);
void write_detection_outputs(const ExperimentConfig& cfg, const RunResult& run);

} // namespace adt
