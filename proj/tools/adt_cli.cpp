#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/cfg/env.h>
#include <spdlog/spdlog.h>

#include "adt/experiment.hpp"
#include "adt/synth.hpp"

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config, "JSON configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", opts.seed, "Run seed (autoencoder and agent initialization, exploration)");
    cmd->add_option("--out", opts.out, "Output directory");
    cmd->add_option("--override", opts.overrides, "Dotted key=value applied after the config file")
        ->allow_extra_args(false);
}

adt::ExperimentConfig resolve(const CommonOptions& opts) {
    try {
        std::optional<std::filesystem::path> file;
        if (!opts.config.empty()) {
            file = opts.config;
        }
        auto cfg = adt::load_config(file, opts.overrides);
        if (opts.seed) {
            cfg.seed = *opts.seed;
        }
        if (!opts.out.empty()) {
            cfg.output_dir = opts.out;
        }
        return cfg;
    } catch (const std::exception& e) {
        throw adt::PhaseError("config", e.what());
    }
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) {
            throw std::invalid_argument("bad sweep value '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

std::string scores_csv(const adt::ScoredSplits& s) {
    std::ostringstream o;
    o.precision(17);
    o << "window_index,split,score,truth\n";
    for (const auto& w : s.adt_train) {
        o << w.window_index << ",adt_train," << w.score << ',' << int{w.truth} << '\n';
    }
    for (const auto& w : s.test) {
        o << w.window_index << ",test," << w.score << ',' << int{w.truth} << '\n';
    }
    return o.str();
}

adt::AutoEncoder load_ae(const adt::ExperimentConfig& cfg) {
    try {
        return adt::AutoEncoder::load(cfg.output_dir / "ae.bin");
    } catch (const std::exception& e) {
        throw adt::PhaseError("train-ae", std::string(e.what()) + " (run train-ae first)");
    }
}

adt::DqnAgent load_agent(const adt::ExperimentConfig& cfg) {
    try {
        auto agent_cfg = cfg.agent;
        agent_cfg.seed = cfg.seed;
        return adt::DqnAgent::load(cfg.output_dir / "agent.bin", agent_cfg);
    } catch (const std::exception& e) {
        throw adt::PhaseError("train-adt", std::string(e.what()) + " (run train-adt first)");
    }
}

} // namespace

int main(int argc, char** argv) {
    spdlog::cfg::load_env_levels();

    CLI::App app{"Agent-based dynamic thresholding for time-series anomaly detection"};
    app.require_subcommand(1);

    CommonOptions opts;
    auto* synth = app.add_subcommand("synth", "Write the configured synthetic series to <out>/synth.csv");
    auto* train_ae = app.add_subcommand("train-ae", "Train the autoencoder; writes ae.bin and scores.csv");
    auto* train_adt = app.add_subcommand("train-adt", "Train the thresholding agent; writes agent.bin and logs");
    auto* detect = app.add_subcommand("detect", "Run ADT and baselines on the test split with saved models");
    auto* benchmark = app.add_subcommand("benchmark", "Full pipeline plus robustness and Wilcoxon tables");
    auto* sweep = app.add_subcommand("sweep", "One seeded run per parameter value");
    auto* plot = app.add_subcommand("plot", "Render a trace CSV as an SVG");
    for (auto* cmd : {synth, train_ae, train_adt, detect, benchmark, sweep}) {
        add_common(cmd, opts);
    }

    std::string sweep_param;
    std::string sweep_values;
    std::optional<std::size_t> jobs;
    sweep->add_option("--param", sweep_param, "l, k, alpha_beta or adt_train")->required();
    sweep->add_option("--values", sweep_values, "Comma-separated values")->required();
    sweep->add_option("--jobs", jobs, "Parallel runs");

    std::string trace_path;
    std::string svg_path;
    plot->add_option("--trace", trace_path, "Trace CSV")->required()->check(CLI::ExistingFile);
    plot->add_option("--svg", svg_path, "Output SVG (default: trace path with .svg)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*plot) {
            std::filesystem::path out = svg_path.empty() ? std::filesystem::path(trace_path).replace_extension(".svg")
                                                         : std::filesystem::path(svg_path);
            try {
                adt::plot_threshold_trace(trace_path, out);
            } catch (const std::exception& e) {
                throw adt::PhaseError("report", e.what());
            }
            spdlog::info("wrote {}", out.string());
            return EXIT_SUCCESS;
        }

        const auto cfg = resolve(opts);
        if (*synth) {
            try {
                const auto series = adt::generate(cfg.data.synth);
                std::filesystem::create_directories(cfg.output_dir);
                adt::write_csv(series, cfg.output_dir / "synth.csv");
            } catch (const std::exception& e) {
                throw adt::PhaseError("preprocess", e.what());
            }
            spdlog::info("wrote {}", (cfg.output_dir / "synth.csv").string());
        } else if (*train_ae) {
            const auto data = adt::prepare_data(cfg);
            const auto ae = adt::train_scorer(cfg, data);
            const auto scores = adt::score_splits(ae, data);
            try {
                std::filesystem::create_directories(cfg.output_dir);
                ae.save(cfg.output_dir / "ae.bin");
                adt::write_atomic(cfg.output_dir / "scores.csv", scores_csv(scores));
            } catch (const std::exception& e) {
                throw adt::PhaseError("report", e.what());
            }
        } else if (*train_adt) {
            const auto data = adt::prepare_data(cfg);
            const auto scores = adt::score_splits(load_ae(cfg), data);
            auto trained = adt::train_adt(cfg, scores.adt_train);
            try {
                std::filesystem::create_directories(cfg.output_dir);
                trained.agent.save(cfg.output_dir / "agent.bin");
                adt::write_training_outputs(cfg.output_dir, trained.report);
            } catch (const std::exception& e) {
                throw adt::PhaseError("report", e.what());
            }
        } else if (*detect) {
            const auto data = adt::prepare_data(cfg);
            adt::RunResult run;
            run.dataset = data.dataset;
            run.scores = adt::score_splits(load_ae(cfg), data);
            run.methods = adt::detect_all(cfg, load_agent(cfg), run.scores);
            adt::write_detection_outputs(cfg, run);
        } else if (*benchmark) {
            const auto bench = adt::run_benchmark(cfg);
            for (const auto& [method, rep] : bench.robustness) {
                spdlog::info("{:<6} subset F1 mean {:.4f} std {:.4f}", method, rep.mean.f1, rep.stddev.f1);
            }
            for (const auto& w : bench.wilcoxon) {
                if (w.result) {
                    spdlog::info("adt vs {}: Wilcoxon p = {:.4g}", w.baseline, w.result->p_value);
                }
            }
        } else if (*sweep) {
            auto sweep_cfg = cfg;
            if (jobs) {
                sweep_cfg.jobs = *jobs;
            }
            adt::SweepParam param;
            std::vector<double> values;
            try {
                param = adt::parse_sweep_param(sweep_param);
                values = parse_values(sweep_values);
                sweep_cfg.validate();
            } catch (const std::exception& e) {
                throw adt::PhaseError("config", e.what());
            }
            adt::run_sweep(sweep_cfg, param, values);
        }
    } catch (const adt::PhaseError& e) {
        std::cerr << "error " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error [unknown] " << e.what() << '\n';
        return 2;
    }
    return EXIT_SUCCESS;
}
