#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace adt::nn {

/// Raised when training produces non-finite values.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputActivation : std::uint8_t { identity = 0, sigmoid = 1 };

struct DenseLayer {
    Eigen::MatrixXd weight; // out x in
    Eigen::VectorXd bias;   // out
};

/// Per-layer activations from a forward pass over a batch (one sample per column).
struct ForwardCache {
    std::vector<Eigen::MatrixXd> inputs;      // input to each layer
    std::vector<Eigen::MatrixXd> activations; // output of each layer
    const Eigen::MatrixXd& output() const { return activations.back(); }
};

struct Gradients {
    std::vector<Eigen::MatrixXd> weight;
    std::vector<Eigen::VectorXd> bias;
    Eigen::MatrixXd input; // dloss/dinput, one column per sample

    bool all_finite() const;
    Gradients& operator+=(const Gradients& other);
    Gradients& operator*=(double factor);
};

/// Fully connected network: relu hidden layers, identity or sigmoid output.
class Mlp {
public:
    Mlp() = default;
    /// All parameters zero.
    Mlp(std::vector<int> layer_sizes, OutputActivation output);
    /// He-style uniform fan-in initialization of weights; biases zero.
    Mlp(std::vector<int> layer_sizes, OutputActivation output, std::mt19937_64& rng);

    const std::vector<int>& layer_sizes() const { return sizes_; }
    OutputActivation output_activation() const { return output_; }
    std::size_t layer_count() const { return layers_.size(); }
    std::size_t parameter_count() const;
    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }

    DenseLayer& layer(std::size_t i) { return layers_.at(i); }
    const DenseLayer& layer(std::size_t i) const { return layers_.at(i); }

    ForwardCache forward(const Eigen::MatrixXd& inputs) const;
    Eigen::VectorXd predict(const Eigen::VectorXd& input) const;
    Eigen::MatrixXd predict_batch(const Eigen::MatrixXd& inputs) const;

    /// Gradients summed over the batch, given dloss/doutput per sample.
    Gradients backward(const ForwardCache& cache, const Eigen::MatrixXd& output_error) const;

    Gradients zero_gradients() const;
    bool all_finite() const;

    /// Parameters flattened layer by layer (weights column-major, then bias).
    std::vector<double> parameters() const;
    void set_parameters(const std::vector<double>& flat);

    void write(std::ostream& out) const;
    static Mlp read(std::istream& in);

    friend bool operator==(const Mlp& a, const Mlp& b);

private:
    std::vector<int> sizes_;
    OutputActivation output_ = OutputActivation::identity;
    std::vector<DenseLayer> layers_;
};

enum class Algorithm : std::uint8_t { sgd, adam };

struct OptimizerConfig {
    Algorithm algorithm = Algorithm::adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First-order optimizer holding its moment estimates for one network.
class Optimizer {
public:
    Optimizer(const Mlp& net, OptimizerConfig config);

    /// Throws DivergenceError if `grads` or the updated parameters are non-finite.
    void apply(Mlp& net, const Gradients& grads);

    std::uint64_t step_count() const { return step_; }
    const OptimizerConfig& config() const { return config_; }

private:
    OptimizerConfig config_;
    std::uint64_t step_ = 0;
    Gradients first_;
    Gradients second_;
};

void save_weights(const Mlp& net, const std::filesystem::path& path);
Mlp load_weights(const std::filesystem::path& path);

} // namespace adt::nn
