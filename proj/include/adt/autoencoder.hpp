#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "adt/nn.hpp"
#include "adt/timeseries.hpp"

namespace adt {

struct AutoEncoderConfig {
    std::vector<int> encoder_hidden{64};
    int latent_dim = 16;
    std::vector<int> decoder_hidden{64};
    nn::OutputActivation output_activation = nn::OutputActivation::sigmoid;
    int epochs = 200;
    int batch_size = 64;
    double learning_rate = 1e-3;
    /// Required ratio of untrained to trained mean reconstruction error.
    double min_improvement = 2.0;
    std::uint64_t seed = 0;
};

/// Min/max of raw reconstruction errors, used to map errors into [0,1].
struct ScoreNormalizer {
    double min = 0.0;
    double max = 0.0;
};

struct ScoredWindow {
    std::size_t window_index = 0;
    double score = 0.0;
    Label truth = 0;
};

struct AeTrainingLog {
    std::vector<double> epoch_loss; // mean squared error per element, per epoch
    double untrained_error = 0.0;   // mean L2 reconstruction error before training
    double trained_error = 0.0;
};

class AutoEncoder {
public:
    AutoEncoder(nn::Mlp encoder, nn::Mlp decoder, std::size_t tau, std::size_t channels);
    /// Freshly initialized network for tau x channels windows.
    static AutoEncoder create(std::size_t tau, std::size_t channels, const AutoEncoderConfig& cfg);

    const nn::Mlp& encoder() const { return encoder_; }
    const nn::Mlp& decoder() const { return decoder_; }
    nn::Mlp& encoder() { return encoder_; }
    nn::Mlp& decoder() { return decoder_; }
    std::size_t tau() const { return tau_; }
    std::size_t channels() const { return channels_; }
    int latent_dim() const { return encoder_.output_size(); }

    Eigen::VectorXd reconstruct(const Eigen::VectorXd& flat_window) const;
    /// L2 norm of the window minus its reconstruction.
    double reconstruction_error(const Window& window) const;
    std::vector<double> reconstruction_errors(const WindowSequence& windows) const;

    void fit_normalizer(std::span<const double> raw_errors);
    void set_normalizer(ScoreNormalizer normalizer);
    const std::optional<ScoreNormalizer>& normalizer() const { return normalizer_; }

    /// Normalized error clamped to [0,1]; throws if no normalizer is fitted.
    double score(const Window& window) const;
    double normalize_error(double raw_error) const;
    std::vector<ScoredWindow> score_all(const WindowSequence& windows) const;

    void save(const std::filesystem::path& path) const;
    static AutoEncoder load(const std::filesystem::path& path);

private:
    void check_shape(const Window& window) const;

    nn::Mlp encoder_;
    nn::Mlp decoder_;
    std::size_t tau_;
    std::size_t channels_;
    std::optional<ScoreNormalizer> normalizer_;
};

/// Trains on normal windows only; anomalous windows are rejected.
AutoEncoder train_ae(const WindowSequence& normal_windows, const AutoEncoderConfig& cfg,
                     AeTrainingLog* log = nullptr);

} // namespace adt
