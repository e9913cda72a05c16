#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "adt/autoencoder.hpp"
#include "adt/synth.hpp"

using namespace adt;

namespace {

WindowSequence windows_of(const Matrix& m, std::size_t tau) {
    return make_windows(TimeSeries(m, std::vector<Label>(static_cast<std::size_t>(m.rows()), 0)), tau);
}

Matrix sine_matrix(std::size_t n) {
    Matrix m(static_cast<Eigen::Index>(n), 1);
    for (std::size_t t = 0; t < n; ++t) {
        m(static_cast<Eigen::Index>(t), 0) = 0.5 + 0.4 * std::sin(0.1 * static_cast<double>(t));
    }
    return m;
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

TEST_CASE("reconstruction error is the L2 norm of the residual") {
    // Zero parameters and identity output reconstruct every window as zeros.
    AutoEncoder ae(nn::Mlp({2, 1}, nn::OutputActivation::identity),
                   nn::Mlp({1, 2}, nn::OutputActivation::identity), 2, 1);
    Matrix a(2, 1);
    a << 1, 0;
    CHECK(ae.reconstruction_error(Window(a)) == 1.0);
    Matrix b(2, 1);
    b << 1, 1;
    CHECK(ae.reconstruction_error(Window(b)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ae.reconstruction_error(Window(Matrix::Zero(2, 1))) == 0.0);
}

TEST_CASE("window shape mismatch is rejected") {
    const auto ae = AutoEncoder::create(3, 1, {});
    CHECK_THROWS_AS(ae.reconstruction_error(Window(Matrix::Zero(2, 1))), std::invalid_argument);
}

TEST_CASE("score maps normalizer endpoints and clamps") {
    AutoEncoder ae(nn::Mlp({2, 1}, nn::OutputActivation::identity),
                   nn::Mlp({1, 2}, nn::OutputActivation::identity), 2, 1);
    Matrix w(2, 1);
    w << 3, 4; // raw error 5
    CHECK_THROWS_AS(ae.score(Window(w)), std::logic_error);
    ae.set_normalizer({5.0, 10.0});
    CHECK(ae.score(Window(w)) == 0.0);
    ae.set_normalizer({1.0, 5.0});
    CHECK(ae.score(Window(w)) == 1.0);
    ae.set_normalizer({1.0, 2.0});
    CHECK(ae.score(Window(w)) == 1.0);
    ae.set_normalizer({0.0, 10.0});
    CHECK(ae.score(Window(w)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("anomalous training windows are rejected") {
    Matrix m = Matrix::Zero(10, 1);
    std::vector<Label> labels(10, 0);
    labels[5] = 1;
    const auto w = make_windows(TimeSeries(m, labels), 3);
    CHECK_THROWS_AS(train_ae(w, {}), std::invalid_argument);
}

TEST_CASE("constant zero windows train to near-zero error") {
    AutoEncoderConfig cfg;
    cfg.output_activation = nn::OutputActivation::identity;
    cfg.epochs = 200;
    cfg.seed = 3;
    AeTrainingLog log;
    const auto ae = train_ae(windows_of(Matrix::Zero(200, 2), 5), cfg, &log);
    CHECK(log.trained_error < 1e-3);
}

TEST_CASE("training loss decreases on a sine corpus") {
    SynthConfig sc;
    sc.n = 1200;
    sc.anomaly_rate = 0.0;
    sc.seed = 4;
    const auto corpus = minmax_normalize(generate(sc)).series;
    AutoEncoderConfig cfg;
    cfg.epochs = 200;
    cfg.seed = 4;
    AeTrainingLog log;
    train_ae(make_windows(corpus, 10), cfg, &log);
    REQUIRE(log.epoch_loss.size() == 200);
    std::vector<double> spans;
    for (std::size_t s = 0; s < 20; ++s) {
        spans.push_back(std::accumulate(log.epoch_loss.begin() + 10 * s, log.epoch_loss.begin() + 10 * (s + 1), 0.0) / 10.0);
    }
    for (std::size_t s = 1; s < spans.size(); ++s) {
        CHECK(spans[s] <= spans[s - 1]);
    }
}

TEST_CASE("training improves reconstruction at least twofold on normal data") {
    SynthConfig sc;
    sc.n = 3000;
    sc.m = 2;
    sc.anomaly_rate = 0.0;
    sc.seed = 12;
    const auto norm = minmax_normalize(generate(sc));
    AutoEncoderConfig cfg;
    cfg.epochs = 60;
    cfg.seed = 12;
    AeTrainingLog log;
    train_ae(make_windows(norm.series, 10), cfg, &log);
    CHECK(log.untrained_error / log.trained_error > 2.0);
}

TEST_CASE("anomalous windows score higher on average") {
    SynthConfig sc;
    sc.n = 6000;
    sc.seed = 21;
    const auto data = generate(sc);
    const auto record = fit_minmax(data, 0, 1200);
    const auto series = record.apply(data);
    const auto all = make_windows(series, 10);
    const auto train = all.slice(0, 1000);
    AutoEncoderConfig cfg;
    cfg.epochs = 60;
    cfg.seed = 21;
    auto ae = train_ae(train, cfg);
    ae.fit_normalizer(ae.reconstruction_errors(all.slice(1000, all.size())));
    std::vector<double> normal, anomalous;
    for (const auto& s : ae.score_all(all)) {
        CHECK(s.score >= 0.0);
        CHECK(s.score <= 1.0);
        (s.truth ? anomalous : normal).push_back(s.score);
    }
    REQUIRE(!anomalous.empty());
    CHECK(mean(anomalous) > mean(normal));
}

TEST_CASE("same seed trains identical parameters") {
    AutoEncoderConfig cfg;
    cfg.epochs = 5;
    cfg.min_improvement = 0.0;
    cfg.seed = 8;
    const auto w = windows_of(sine_matrix(300), 6);
    const auto a = train_ae(w, cfg);
    const auto b = train_ae(w, cfg);
    CHECK(a.encoder() == b.encoder());
    CHECK(a.decoder() == b.decoder());
}

TEST_CASE("autoencoder file round trip") {
    AutoEncoderConfig cfg;
    cfg.epochs = 2;
    cfg.min_improvement = 0.0;
    auto ae = train_ae(windows_of(sine_matrix(100), 4), cfg);
    ae.set_normalizer({0.25, 0.75});
    const auto path = std::filesystem::temp_directory_path() / "adt_ae_roundtrip.bin";
    ae.save(path);
    const auto back = AutoEncoder::load(path);
    CHECK(back.encoder() == ae.encoder());
    CHECK(back.decoder() == ae.decoder());
    CHECK(back.tau() == 4);
    CHECK(back.normalizer()->min == 0.25);
    CHECK(back.normalizer()->max == 0.75);
    std::filesystem::remove(path);
}
