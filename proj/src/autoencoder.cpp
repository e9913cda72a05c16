#include "adt/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "adt/binary_io.hpp"

namespace adt {

namespace {

constexpr std::array<char, 4> kMagic = {'A', 'D', 'T', 'A'};
constexpr std::uint32_t kFormatVersion = 1;

Eigen::MatrixXd stack_windows(const WindowSequence& windows) {
    const auto dim = static_cast<Eigen::Index>(windows[0].flatten().size());
    Eigen::MatrixXd x(dim, static_cast<Eigen::Index>(windows.size()));
    for (std::size_t i = 0; i < windows.size(); ++i) {
        x.col(static_cast<Eigen::Index>(i)) = windows[i].flatten();
    }
    return x;
}

} // namespace

AutoEncoder::AutoEncoder(nn::Mlp encoder, nn::Mlp decoder, std::size_t tau, std::size_t channels)
    : encoder_(std::move(encoder)), decoder_(std::move(decoder)), tau_(tau), channels_(channels) {
    const auto dim = static_cast<int>(tau_ * channels_);
    if (tau_ < 1 || channels_ < 1) {
        throw std::invalid_argument("autoencoder needs tau >= 1 and at least one channel");
    }
    if (encoder_.input_size() != dim || decoder_.output_size() != dim) {
        throw std::invalid_argument("autoencoder input/output size must equal tau * channels");
    }
    if (encoder_.output_size() != decoder_.input_size()) {
        throw std::invalid_argument("encoder output and decoder input sizes differ");
    }
}

AutoEncoder AutoEncoder::create(std::size_t tau, std::size_t channels, const AutoEncoderConfig& cfg) {
    if (cfg.latent_dim < 1) {
        throw std::invalid_argument("latent dimension must be positive");
    }
    const int dim = static_cast<int>(tau * channels);
    std::vector<int> enc{dim};
    enc.insert(enc.end(), cfg.encoder_hidden.begin(), cfg.encoder_hidden.end());
    enc.push_back(cfg.latent_dim);
    std::vector<int> dec{cfg.latent_dim};
    dec.insert(dec.end(), cfg.decoder_hidden.begin(), cfg.decoder_hidden.end());
    dec.push_back(dim);

    std::mt19937_64 rng(cfg.seed);
    nn::Mlp encoder(std::move(enc), nn::OutputActivation::identity, rng);
    nn::Mlp decoder(std::move(dec), cfg.output_activation, rng);
    return AutoEncoder(std::move(encoder), std::move(decoder), tau, channels);
}

void AutoEncoder::check_shape(const Window& window) const {
    if (window.tau() != tau_ || window.channels() != channels_) {
        throw std::invalid_argument("window shape " + std::to_string(window.tau()) + "x" +
                                    std::to_string(window.channels()) +
                                    " does not match autoencoder " + std::to_string(tau_) + "x" +
                                    std::to_string(channels_));
    }
}

Eigen::VectorXd AutoEncoder::reconstruct(const Eigen::VectorXd& flat_window) const {
    return decoder_.predict(encoder_.predict(flat_window));
}

double AutoEncoder::reconstruction_error(const Window& window) const {
    check_shape(window);
    const Eigen::VectorXd x = window.flatten();
    return (x - reconstruct(x)).norm();
}

std::vector<double> AutoEncoder::reconstruction_errors(const WindowSequence& windows) const {
    std::vector<double> errors;
    errors.reserve(windows.size());
    constexpr std::size_t kChunk = 1024;
    for (std::size_t begin = 0; begin < windows.size(); begin += kChunk) {
        const std::size_t end = std::min(windows.size(), begin + kChunk);
        for (std::size_t i = begin; i < end; ++i) {
            check_shape(windows[i]);
        }
        const Eigen::MatrixXd x = stack_windows(windows.slice(begin, end));
        const Eigen::MatrixXd recon = decoder_.predict_batch(encoder_.predict_batch(x));
        const Eigen::VectorXd norms = (x - recon).colwise().norm().transpose();
        errors.insert(errors.end(), norms.data(), norms.data() + norms.size());
    }
    return errors;
}

void AutoEncoder::fit_normalizer(std::span<const double> raw_errors) {
    if (raw_errors.empty()) {
        throw std::invalid_argument("cannot fit score normalizer on an empty error set");
    }
    const auto [lo, hi] = std::minmax_element(raw_errors.begin(), raw_errors.end());
    set_normalizer({*lo, *hi});
}

void AutoEncoder::set_normalizer(ScoreNormalizer normalizer) {
    if (!(normalizer.min >= 0.0) || !(normalizer.max >= normalizer.min) ||
        !std::isfinite(normalizer.max)) {
        throw std::invalid_argument("score normalizer needs 0 <= min <= max");
    }
    normalizer_ = normalizer;
}

double AutoEncoder::normalize_error(double raw_error) const {
    if (!normalizer_) {
        throw std::logic_error("score normalizer has not been fitted");
    }
    const double span = normalizer_->max - normalizer_->min;
    if (span <= 0.0) {
        return raw_error > normalizer_->max ? 1.0 : 0.0;
    }
    return std::clamp((raw_error - normalizer_->min) / span, 0.0, 1.0);
}

double AutoEncoder::score(const Window& window) const {
    if (!normalizer_) {
        throw std::logic_error("score normalizer has not been fitted");
    }
    return normalize_error(reconstruction_error(window));
}

std::vector<ScoredWindow> AutoEncoder::score_all(const WindowSequence& windows) const {
    if (!normalizer_) {
        throw std::logic_error("score normalizer has not been fitted");
    }
    const auto errors = reconstruction_errors(windows);
    std::vector<ScoredWindow> out(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        out[i] = {windows[i].start_index(), normalize_error(errors[i]), windows[i].label()};
    }
    return out;
}

void AutoEncoder::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write autoencoder file " + path.string());
    }
    out.write(kMagic.data(), kMagic.size());
    io::write_le<std::uint32_t>(out, kFormatVersion);
    io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(tau_));
    io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(channels_));
    io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(latent_dim()));
    io::write_le<std::uint8_t>(out, normalizer_ ? 1 : 0);
    io::write_le<double>(out, normalizer_ ? normalizer_->min : 0.0);
    io::write_le<double>(out, normalizer_ ? normalizer_->max : 0.0);
    encoder_.write(out);
    decoder_.write(out);
    if (!out) {
        throw std::runtime_error("failed writing autoencoder file " + path.string());
    }
}

AutoEncoder AutoEncoder::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open autoencoder file " + path.string());
    }
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw std::runtime_error(path.string() + ": not an autoencoder file");
    }
    if (io::read_le<std::uint32_t>(in) != kFormatVersion) {
        throw std::runtime_error(path.string() + ": unsupported autoencoder file version");
    }
    const auto tau = io::read_le<std::uint32_t>(in);
    const auto channels = io::read_le<std::uint32_t>(in);
    const auto latent = io::read_le<std::uint32_t>(in);
    const bool has_normalizer = io::read_le<std::uint8_t>(in) != 0;
    const double lo = io::read_le<double>(in);
    const double hi = io::read_le<double>(in);
    nn::Mlp encoder = nn::Mlp::read(in);
    nn::Mlp decoder = nn::Mlp::read(in);
    if (encoder.output_size() != static_cast<int>(latent)) {
        throw std::runtime_error(path.string() + ": latent size does not match encoder");
    }
    AutoEncoder ae(std::move(encoder), std::move(decoder), tau, channels);
    if (has_normalizer) {
        ae.set_normalizer({lo, hi});
    }
    return ae;
}

AutoEncoder train_ae(const WindowSequence& normal_windows, const AutoEncoderConfig& cfg,
                     AeTrainingLog* log) {
    if (normal_windows.empty()) {
        throw std::invalid_argument("autoencoder training needs at least one window");
    }
    for (const auto& w : normal_windows.windows) {
        if (w.label() != 0) {
            throw std::invalid_argument("autoencoder training set contains an anomalous window (start " +
                                        std::to_string(w.start_index()) + ")");
        }
    }
    if (cfg.epochs < 1 || cfg.batch_size < 1) {
        throw std::invalid_argument("epochs and batch size must be positive");
    }
    const Window& first = normal_windows[0];
    AutoEncoder ae = AutoEncoder::create(first.tau(), first.channels(), cfg);
    for (const auto& w : normal_windows.windows) {
        if (w.tau() != first.tau() || w.channels() != first.channels()) {
            throw std::invalid_argument("training windows have inconsistent shapes");
        }
    }

    const Eigen::MatrixXd data = stack_windows(normal_windows);
    const auto n = static_cast<std::size_t>(data.cols());
    const auto dim = static_cast<double>(data.rows());
    auto mean_l2 = [&] {
        const Eigen::MatrixXd recon =
            ae.decoder().predict_batch(ae.encoder().predict_batch(data));
        return (data - recon).colwise().norm().mean();
    };

    const double untrained = mean_l2();
    nn::OptimizerConfig opt_cfg{nn::Algorithm::adam, cfg.learning_rate};
    nn::Optimizer enc_opt(ae.encoder(), opt_cfg);
    nn::Optimizer dec_opt(ae.decoder(), opt_cfg);
    std::mt19937_64 rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    std::vector<double> epoch_loss;
    epoch_loss.reserve(static_cast<std::size_t>(cfg.epochs));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        for (std::size_t begin = 0; begin < n; begin += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end = std::min(n, begin + static_cast<std::size_t>(cfg.batch_size));
            const std::vector<Eigen::Index> idx(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                                order.begin() + static_cast<std::ptrdiff_t>(end));
            const Eigen::MatrixXd batch = data(Eigen::all, idx);
            const auto enc_cache = ae.encoder().forward(batch);
            const auto dec_cache = ae.decoder().forward(enc_cache.output());
            const Eigen::MatrixXd diff = dec_cache.output() - batch;
            const double scale = 1.0 / (dim * static_cast<double>(batch.cols()));
            loss_sum += diff.squaredNorm() * scale * static_cast<double>(batch.cols());

            // d(mean squared error)/d(reconstruction)
            const Eigen::MatrixXd out_err = 2.0 * scale * diff;
            const nn::Gradients dec_grads = ae.decoder().backward(dec_cache, out_err);
            const nn::Gradients enc_grads = ae.encoder().backward(enc_cache, dec_grads.input);
            enc_opt.apply(ae.encoder(), enc_grads);
            dec_opt.apply(ae.decoder(), dec_grads);
        }
        const double mean_loss = loss_sum / static_cast<double>(n);
        if (!std::isfinite(mean_loss)) {
            throw nn::DivergenceError("autoencoder loss became non-finite at epoch " +
                                      std::to_string(epoch));
        }
        epoch_loss.push_back(mean_loss);
    }

    const double trained = mean_l2();
    if (trained > 0.0 && trained * cfg.min_improvement > untrained) {
        throw std::runtime_error("autoencoder training reduced mean reconstruction error only from " +
                                 std::to_string(untrained) + " to " + std::to_string(trained) +
                                 " (required factor " + std::to_string(cfg.min_improvement) + ")");
    }
    if (log) {
        log->epoch_loss = std::move(epoch_loss);
        log->untrained_error = untrained;
        log->trained_error = trained;
    }
    return ae;
}

} // namespace adt
