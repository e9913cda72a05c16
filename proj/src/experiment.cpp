#include "adt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "adt/svg.hpp"
#include "adt/synth.hpp"

namespace adt {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string fmt_num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <typename F>
auto in_phase(const std::string& phase, F&& body) {
    try {
        return body();
    } catch (const PhaseError&) {
        throw;
    } catch (const std::exception& e) {
        throw PhaseError(phase, e.what());
    }
}

WindowSequence normal_only(const WindowSequence& seq) {
    WindowSequence out;
    out.tau = seq.tau;
    for (const auto& w : seq.windows) {
        if (w.label() == 0) {
            out.windows.push_back(w);
        }
    }
    return out;
}

MinMaxRecord merge(const MinMaxRecord& a, const MinMaxRecord& b) {
    MinMaxRecord out = a;
    for (std::size_t c = 0; c < out.min.size(); ++c) {
        out.min[c] = std::min(a.min[c], b.min[c]);
        out.max[c] = std::max(a.max[c], b.max[c]);
    }
    return out;
}

std::vector<double> scores_of(std::span<const ScoredWindow> w) {
    std::vector<double> out;
    out.reserve(w.size());
    for (const auto& s : w) {
        out.push_back(s.score);
    }
    return out;
}

std::vector<Label> truths_of(std::span<const ScoredWindow> w) {
    std::vector<Label> out;
    out.reserve(w.size());
    for (const auto& s : w) {
        out.push_back(s.truth);
    }
    return out;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_number(const std::string& s, std::size_t line) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("trace line " + std::to_string(line) + ": '" + s + "' is not a number");
    }
    return v;
}

} // namespace

PhaseError::PhaseError(std::string phase, const std::string& message)
    : std::runtime_error("[" + phase + "] " + message), phase_(std::move(phase)) {}

PreparedData prepare_data(const ExperimentConfig& cfg) {
    return in_phase("preprocess", [&] {
        PreparedData out;
        out.dataset = cfg.data.name;
        const TimeSeries raw =
            cfg.data.kind == SourceKind::synth ? generate(cfg.data.synth) : load_csv(cfg.data.csv.path, cfg.data.csv.schema);
        if (!raw.has_labels()) {
            throw DataError("the evaluated series has no labels");
        }
        std::optional<TimeSeries> normal;
        if (cfg.data.kind == SourceKind::csv && cfg.data.csv.normal_path) {
            normal = load_csv(*cfg.data.csv.normal_path, cfg.data.csv.schema);
            if (normal->channels() != raw.channels()) {
                throw DataError("normal and evaluated recordings have different channel counts");
            }
        }
        if (cfg.tau > raw.length()) {
            throw DataError("series of length " + std::to_string(raw.length()) + " is shorter than tau");
        }
        const std::size_t n_windows = raw.length() - cfg.tau + 1;
        const auto frac = [&](double f) { return static_cast<std::size_t>(f * static_cast<double>(n_windows)); };
        const std::size_t n_ae = normal ? 0 : frac(cfg.split.ae_train);
        const std::size_t n_adt = frac(cfg.split.adt_train);
        if (n_adt <= cfg.env.k || n_ae + n_adt + cfg.env.k >= n_windows) {
            throw DataError("split leaves too few windows for training or testing (" +
                            std::to_string(n_windows) + " windows)");
        }

        // Normalization is fitted on every point the training windows touch.
        out.record = fit_minmax(raw, 0, n_ae + n_adt + cfg.tau - 1);
        if (normal) {
            out.record = merge(out.record, fit_minmax(*normal, 0, normal->length()));
        }
        const auto windows = make_windows(out.record.apply(raw), cfg.tau);
        out.ae_train = normal ? normal_only(make_windows(out.record.apply(*normal), cfg.tau))
                              : normal_only(windows.slice(0, n_ae));
        out.adt_train = windows.slice(n_ae, n_ae + n_adt);
        out.test = windows.slice(n_ae + n_adt, windows.size());
        if (out.ae_train.empty()) {
            throw DataError("no normal windows available for autoencoder training");
        }
        const auto labels = out.adt_train.labels();
        const auto anomalous = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label{1}));
        if (anomalous == 0 || anomalous == labels.size()) {
            throw DataError("the ADT-training segment (windows " + std::to_string(n_ae) + ".." +
                            std::to_string(n_ae + n_adt) + ") contains a single class; adjust split.adt_train");
        }
        spdlog::info("preprocess: {} windows (ae-train {}, adt-train {} with {} anomalous, test {})", n_windows,
                     out.ae_train.size(), out.adt_train.size(), anomalous, out.test.size());
        return out;
    });
}

AutoEncoder train_scorer(const ExperimentConfig& cfg, const PreparedData& data, AeTrainingLog* log) {
    return in_phase("train-ae", [&] {
        AutoEncoderConfig ae_cfg = cfg.ae;
        ae_cfg.seed = cfg.seed;
        AeTrainingLog local;
        AutoEncoder ae = train_ae(data.ae_train, ae_cfg, log ? log : &local);
        ae.fit_normalizer(ae.reconstruction_errors(data.adt_train));
        const auto& l = log ? *log : local;
        spdlog::info("train-ae: mean reconstruction error {:.5f} -> {:.5f}", l.untrained_error, l.trained_error);
        return ae;
    });
}

ScoredSplits score_splits(const AutoEncoder& ae, const PreparedData& data) {
    return in_phase("train-ae", [&] { return ScoredSplits{ae.score_all(data.adt_train), ae.score_all(data.test)}; });
}

AdtTraining train_adt(const ExperimentConfig& cfg, std::span<const ScoredWindow> adt_train) {
    return in_phase("train-adt", [&] {
        AgentConfig agent_cfg = cfg.agent;
        agent_cfg.seed = cfg.seed;
        DqnAgent agent(agent_cfg);
        ThresholdingEnv env(std::vector<ScoredWindow>(adt_train.begin(), adt_train.end()), cfg.env);
        const std::size_t every = std::max<std::size_t>(1, agent_cfg.episodes / 10);
        TrainingHooks hooks;
        hooks.on_episode_end = [&](const EpisodeLog& log, const DqnAgent&) {
            if (log.episode % every == 0) {
                spdlog::debug("train-adt: episode {} reward {:.3f} epsilon {:.4f}", log.episode, log.total_reward,
                              log.epsilon);
            }
        };
        const auto start = Clock::now();
        TrainingReport report = train(agent, env, hooks);
        const double ms = elapsed_ms(start);
        spdlog::info("train-adt: {} episodes in {:.0f} ms", agent_cfg.episodes, ms);
        return AdtTraining{std::move(agent), std::move(report), ms};
    });
}

MethodRun detect_adt(const DqnAgent& agent, const EnvConfig& env, std::span<const ScoredWindow> test) {
    const auto start = Clock::now();
    InferenceTrace trace = infer(agent, test, env);
    MethodRun run{"adt", std::move(trace.thresholds), evaluate_run(trace.predictions, truths_of(test)), 0.0};
    run.wall_ms = elapsed_ms(start);
    return run;
}

MethodRun detect_static(std::span<const ScoredWindow> test) {
    const auto start = Clock::now();
    const auto scores = scores_of(test);
    const auto truths = truths_of(test);
    const StaticThresholdResult best = optimal_static_threshold(scores, truths);
    MethodRun run{"static", std::vector<double>(test.size(), best.threshold),
                  evaluate_run(apply_threshold(scores, best.threshold), truths), 0.0};
    run.wall_ms = elapsed_ms(start);
    return run;
}

MethodRun detect_dspot(const SpotConfig& cfg, std::span<const ScoredWindow> calibration,
                       std::span<const ScoredWindow> test) {
    const auto start = Clock::now();
    ThresholdTrace trace = run_dspot(scores_of(calibration), scores_of(test), cfg);
    MethodRun run{"dspot", std::move(trace.thresholds), evaluate_run(trace.predictions, truths_of(test)), 0.0};
    run.wall_ms = elapsed_ms(start);
    return run;
}

std::vector<MethodRun> detect_all(const ExperimentConfig& cfg, const DqnAgent& agent, const ScoredSplits& scores) {
    return in_phase("detect", [&] {
        std::vector<MethodRun> runs;
        runs.push_back(detect_adt(agent, cfg.env, scores.test));
        if (cfg.baselines.static_enabled) {
            runs.push_back(detect_static(scores.test));
        }
        if (cfg.baselines.dspot_enabled) {
            runs.push_back(detect_dspot(cfg.baselines.spot, scores.adt_train, scores.test));
        }
        for (const auto& r : runs) {
            spdlog::info("detect: {:<6} P {:.4f} R {:.4f} F1 {:.4f}", r.method, r.result.metrics.precision,
                         r.result.metrics.recall, r.result.metrics.f1);
        }
        return runs;
    });
}

const MethodRun& RunResult::method(const std::string& name) const {
    for (const auto& m : methods) {
        if (m.method == name) {
            return m;
        }
    }
    throw std::out_of_range("no results for method '" + name + "'");
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string results_csv(const RunResult& run, bool wall_time) {
    std::ostringstream o;
    o << "method,dataset,split,P,R,F1,wall_ms\n";
    for (const auto& m : run.methods) {
        const auto& x = m.result.metrics;
        o << m.method << ',' << run.dataset << ",test," << fmt_num(x.precision) << ',' << fmt_num(x.recall) << ','
          << fmt_num(x.f1) << ',';
        if (wall_time) {
            o << fmt_num(std::round(m.wall_ms * 1000.0) / 1000.0);
        }
        o << '\n';
    }
    return o.str();
}

std::string trace_csv(std::span<const ScoredWindow> test, const MethodRun& run) {
    if (run.thresholds.size() != test.size() || run.result.predictions.size() != test.size()) {
        throw std::invalid_argument("trace length does not match the scored stream");
    }
    std::ostringstream o;
    o << "window_index,score,truth,threshold,prediction\n";
    for (std::size_t i = 0; i < test.size(); ++i) {
        o << test[i].window_index << ',' << fmt_num(test[i].score) << ',' << int{test[i].truth} << ','
          << fmt_num(run.thresholds[i]) << ',' << int{run.result.predictions[i]} << '\n';
    }
    return o.str();
}

std::string training_log_csv(const TrainingReport& report) {
    std::ostringstream o;
    o << "episode,total_reward,epsilon\n";
    for (const auto& e : report.episodes) {
        o << e.episode << ',' << fmt_num(e.total_reward) << ',' << fmt_num(e.epsilon) << '\n';
    }
    return o.str();
}

std::string training_reward_svg(const TrainingReport& report, std::size_t smoothing) {
    svg::Series raw{"episode reward", {}, {}, "#aec7e8"};
    svg::Series avg{std::to_string(smoothing) + "-episode average", {}, {}, "#1f77b4"};
    double window_sum = 0.0;
    for (std::size_t i = 0; i < report.episodes.size(); ++i) {
        const auto& e = report.episodes[i];
        raw.x.push_back(static_cast<double>(e.episode));
        raw.y.push_back(e.total_reward);
        window_sum += e.total_reward;
        if (i >= smoothing) {
            window_sum -= report.episodes[i - smoothing].total_reward;
        }
        avg.x.push_back(static_cast<double>(e.episode));
        avg.y.push_back(window_sum / static_cast<double>(std::min(i + 1, smoothing)));
    }
    svg::Chart chart;
    chart.title = "Training reward per episode";
    chart.x_label = "episode";
    chart.y_label = "total reward";
    chart.series = {raw, avg};
    return svg::render(chart);
}

std::string robustness_csv(const BenchmarkResult& bench) {
    std::ostringstream o;
    o << "method,subset,begin,end,P,R,F1\n";
    for (const auto& [method, rep] : bench.robustness) {
        for (std::size_t i = 0; i < rep.subsets.size(); ++i) {
            const auto& s = rep.subsets[i];
            o << method << ',' << i << ',' << s.begin << ',' << s.end << ',' << fmt_num(s.metrics.precision) << ','
              << fmt_num(s.metrics.recall) << ',' << fmt_num(s.metrics.f1) << '\n';
        }
        o << method << ",mean,,," << fmt_num(rep.mean.precision) << ',' << fmt_num(rep.mean.recall) << ','
          << fmt_num(rep.mean.f1) << '\n';
        o << method << ",std,,," << fmt_num(rep.stddev.precision) << ',' << fmt_num(rep.stddev.recall) << ','
          << fmt_num(rep.stddev.f1) << '\n';
    }
    return o.str();
}

std::string wilcoxon_csv(const BenchmarkResult& bench) {
    std::ostringstream o;
    o << "comparison,n,statistic,p_value\n";
    for (const auto& w : bench.wilcoxon) {
        o << "adt_vs_" << w.baseline << ',';
        if (w.result) {
            o << w.result->n << ',' << fmt_num(w.result->statistic) << ',' << fmt_num(w.result->p_value);
        } else {
            o << "0,,";
        }
        o << '\n';
    }
    return o.str();
}

void write_training_outputs(const std::filesystem::path& dir, const TrainingReport& report) {
    write_atomic(dir / "training_log.csv", training_log_csv(report));
    write_atomic(dir / "training_reward.svg", training_reward_svg(report));
}

void write_detection_outputs(const ExperimentConfig& cfg, const RunResult& run) {
    in_phase("report", [&] {
        const auto& dir = cfg.output_dir;
        write_atomic(dir / "results.csv", results_csv(run, cfg.report_wall_time));
        for (const auto& m : run.methods) {
            write_atomic(dir / ("trace_" + m.method + ".csv"), trace_csv(run.scores.test, m));
        }
        plot_threshold_trace(dir / "trace_adt.csv", dir / "threshold_trace.svg");
        return 0;
    });
}

RunResult run_pipeline(const ExperimentConfig& cfg) {
    const PreparedData data = prepare_data(cfg);
    const AutoEncoder ae = train_scorer(cfg, data);
    RunResult run;
    run.dataset = data.dataset;
    run.scores = score_splits(ae, data);
    AdtTraining adt = train_adt(cfg, run.scores.adt_train);
    run.training = std::move(adt.report);
    run.train_ms = adt.train_ms;
    run.methods = detect_all(cfg, adt.agent, run.scores);
    in_phase("report", [&] {
        write_training_outputs(cfg.output_dir, run.training);
        return 0;
    });
    write_detection_outputs(cfg, run);
    return run;
}

BenchmarkResult run_benchmark(const ExperimentConfig& cfg) {
    BenchmarkResult bench{run_pipeline(cfg), {}, {}};
    in_phase("report", [&] {
        for (const auto& m : bench.run.methods) {
            bench.robustness.emplace_back(
                m.method, subset_robustness(m.result.predictions, m.result.truths, cfg.robustness_subsets));
        }
        const auto adt_f1 = f1_values(bench.robustness.front().second);
        for (std::size_t i = 1; i < bench.robustness.size(); ++i) {
            WilcoxonEntry entry{bench.robustness[i].first, std::nullopt};
            try {
                entry.result = wilcoxon_two_tailed(adt_f1, f1_values(bench.robustness[i].second));
            } catch (const std::invalid_argument& e) {
                spdlog::warn("wilcoxon adt vs {}: {}", entry.baseline, e.what());
            }
            bench.wilcoxon.push_back(entry);
        }
        write_atomic(cfg.output_dir / "robustness.csv", robustness_csv(bench));
        write_atomic(cfg.output_dir / "wilcoxon.csv", wilcoxon_csv(bench));
        return 0;
    });
    return bench;
}

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "l") {
        return SweepParam::l;
    }
    if (name == "k") {
        return SweepParam::k;
    }
    if (name == "alpha_beta" || name == "alpha") {
        return SweepParam::alpha_beta;
    }
    if (name == "adt_train") {
        return SweepParam::adt_train;
    }
    throw std::invalid_argument("unknown sweep parameter '" + name + "' (expected l, k, alpha_beta or adt_train)");
}

std::string to_string(SweepParam p) {
    switch (p) {
    case SweepParam::l:
        return "l";
    case SweepParam::k:
        return "k";
    case SweepParam::alpha_beta:
        return "alpha_beta";
    case SweepParam::adt_train:
        return "adt_train";
    }
    return "unknown";
}

ExperimentConfig with_param(const ExperimentConfig& cfg, SweepParam param, double value) {
    ExperimentConfig out = cfg;
    const auto as_count = [&](const char* what) {
        if (!(value >= 1.0) || value != std::floor(value)) {
            throw std::invalid_argument(std::string(what) + " must be a positive integer");
        }
        return static_cast<std::size_t>(value);
    };
    switch (param) {
    case SweepParam::l:
        out.agent.hold = as_count("l");
        break;
    case SweepParam::k:
        out.env.k = as_count("k");
        break;
    case SweepParam::alpha_beta:
        out.env.alpha = value;
        out.env.beta = 1.0 - value;
        break;
    case SweepParam::adt_train:
        out.split.adt_train = value;
        break;
    }
    out.validate();
    return out;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, SweepParam param, const std::vector<double>& values) {
    if (values.empty()) {
        throw std::invalid_argument("sweep needs at least one value");
    }
    std::vector<ExperimentConfig> runs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ExperimentConfig c = in_phase("preprocess", [&] { return with_param(cfg, param, values[i]); });
        c.seed = cfg.seed + i;
        runs.push_back(std::move(c));
    }

    // The autoencoder depends only on the data split, so one is shared unless the split itself varies.
    std::optional<PreparedData> shared_data;
    std::optional<AutoEncoder> shared_ae;
    if (param != SweepParam::adt_train) {
        shared_data = prepare_data(cfg);
        shared_ae = train_scorer(cfg, *shared_data);
    }

    std::vector<SweepPoint> points(values.size());
    std::vector<std::string> errors(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            try {
                const ExperimentConfig& c = runs[i];
                ScoredSplits scores;
                if (shared_ae) {
                    scores = score_splits(*shared_ae, *shared_data);
                } else {
                    ExperimentConfig data_cfg = c;
                    data_cfg.seed = cfg.seed;
                    const PreparedData data = prepare_data(data_cfg);
                    scores = score_splits(train_scorer(data_cfg, data), data);
                }
                AdtTraining adt = train_adt(c, scores.adt_train);
                const MethodRun run = in_phase("detect", [&] { return detect_adt(adt.agent, c.env, scores.test); });
                points[i] = {values[i], c.seed, run.result.metrics, adt.train_ms};
                spdlog::info("sweep {}={}: F1 {:.4f}, training {:.0f} ms", to_string(param), values[i],
                             run.result.metrics.f1, adt.train_ms);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const std::size_t jobs = std::min(cfg.jobs, values.size());
    std::vector<std::thread> pool;
    for (std::size_t j = 1; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) {
            throw PhaseError("sweep", to_string(param) + "=" + fmt_num(values[i]) + ": " + errors[i]);
        }
    }

    in_phase("report", [&] {
        std::ostringstream o;
        o << "parameter,value,seed,P,R,F1,train_ms\n";
        svg::Series f1{"F1", {}, {}, "#1f77b4"};
        f1.markers = true;
        svg::Series time{"training time (normalized)", {}, {}, "#ff7f0e"};
        time.markers = true;
        double max_ms = 0.0;
        for (const auto& p : points) {
            max_ms = std::max(max_ms, p.train_ms);
        }
        for (const auto& p : points) {
            o << to_string(param) << ',' << fmt_num(p.value) << ',' << p.seed << ',' << fmt_num(p.metrics.precision)
              << ',' << fmt_num(p.metrics.recall) << ',' << fmt_num(p.metrics.f1) << ','
              << fmt_num(std::round(p.train_ms)) << '\n';
            f1.x.push_back(p.value);
            f1.y.push_back(p.metrics.f1);
            time.x.push_back(p.value);
            time.y.push_back(max_ms > 0.0 ? p.train_ms / max_ms : 0.0);
        }
        write_atomic(cfg.output_dir / "sweep.csv", o.str());
        svg::Chart chart;
        chart.title = "F1 and training time against " + to_string(param);
        chart.x_label = to_string(param);
        chart.y_label = "F1 / relative training time";
        chart.series = {f1, time};
        write_atomic(cfg.output_dir / "sweep.svg", svg::render(chart));
        return 0;
    });
    return points;
}

void plot_threshold_trace(const std::filesystem::path& trace_csv, const std::filesystem::path& svg_out) {
    std::ifstream in(trace_csv);
    if (!in) {
        throw std::runtime_error("cannot open trace " + trace_csv.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("trace " + trace_csv.string() + " is empty");
    }
    const auto header = split_line(line);
    const std::vector<std::string> needed{"window_index", "score", "truth", "threshold", "prediction"};
    std::vector<std::size_t> col;
    for (const auto& name : needed) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw std::runtime_error("trace " + trace_csv.string() + " lacks column '" + name + "'");
        }
        col.push_back(static_cast<std::size_t>(it - header.begin()));
    }

    svg::Series score{"anomaly score", {}, {}, "#1f77b4"};
    svg::Series threshold{"threshold", {}, {}, "#2ca02c"};
    threshold.step = true;
    svg::Chart chart;
    bool in_span = false;
    double span_start = 0.0;
    double last_x = 0.0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error("trace line " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " fields, expected " +
                                     std::to_string(header.size()));
        }
        const double x = parse_number(cells[col[0]], line_no);
        const double truth = parse_number(cells[col[2]], line_no);
        score.x.push_back(x);
        score.y.push_back(parse_number(cells[col[1]], line_no));
        threshold.x.push_back(x);
        threshold.y.push_back(parse_number(cells[col[3]], line_no));
        if (truth != 0.0 && !in_span) {
            in_span = true;
            span_start = x;
        } else if (truth == 0.0 && in_span) {
            chart.spans.push_back({span_start, last_x});
            in_span = false;
        }
        last_x = x;
    }
    if (in_span) {
        chart.spans.push_back({span_start, last_x});
    }
    if (score.x.empty()) {
        throw std::runtime_error("trace " + trace_csv.string() + " has no rows");
    }
    chart.title = "Anomaly scores and threshold";
    chart.x_label = "window index";
    chart.y_label = "score";
    chart.span_label = "anomalous windows";
    chart.width = 1400;
    chart.series = {score, threshold};
    write_atomic(svg_out, svg::render(chart));
}

} // namespace adt
