#include "adt/nn.hpp"

#include "adt/binary_io.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace adt::nn {

namespace {

using io::read_le;
using io::write_le;

constexpr std::array<char, 4> kMagic = {'A', 'D', 'T', 'N'};
constexpr std::uint32_t kFormatVersion = 1;

void check_sizes(const std::vector<int>& sizes) {
    if (sizes.size() < 2) {
        throw std::invalid_argument("network needs at least an input and an output layer");
    }
    for (const int s : sizes) {
        if (s < 1) {
            throw std::invalid_argument("layer sizes must be positive");
        }
    }
}

} // namespace

bool Gradients::all_finite() const {
    for (const auto& w : weight) {
        if (!w.allFinite()) {
            return false;
        }
    }
    for (const auto& b : bias) {
        if (!b.allFinite()) {
            return false;
        }
    }
    return true;
}

Gradients& Gradients::operator+=(const Gradients& other) {
    if (other.weight.size() != weight.size()) {
        throw std::invalid_argument("gradient shape mismatch");
    }
    for (std::size_t i = 0; i < weight.size(); ++i) {
        weight[i] += other.weight[i];
        bias[i] += other.bias[i];
    }
    return *this;
}

Gradients& Gradients::operator*=(double factor) {
    for (std::size_t i = 0; i < weight.size(); ++i) {
        weight[i] *= factor;
        bias[i] *= factor;
    }
    input *= factor;
    return *this;
}

Mlp::Mlp(std::vector<int> layer_sizes, OutputActivation output)
    : sizes_(std::move(layer_sizes)), output_(output) {
    check_sizes(sizes_);
    for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
        layers_.push_back({Eigen::MatrixXd::Zero(sizes_[i + 1], sizes_[i]),
                           Eigen::VectorXd::Zero(sizes_[i + 1])});
    }
}

Mlp::Mlp(std::vector<int> layer_sizes, OutputActivation output, std::mt19937_64& rng)
    : Mlp(std::move(layer_sizes), output) {
    for (auto& layer : layers_) {
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.weight.cols()));
        std::uniform_real_distribution<double> dist(-limit, limit);
        // Column-major fill order keeps initialization tied to the seed alone.
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
            for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
                layer.weight(r, c) = dist(rng);
            }
        }
    }
}

std::size_t Mlp::parameter_count() const {
    std::size_t total = 0;
    for (const auto& layer : layers_) {
        total += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
    }
    return total;
}

ForwardCache Mlp::forward(const Eigen::MatrixXd& inputs) const {
    if (inputs.rows() != sizes_.front()) {
        throw std::invalid_argument("input has " + std::to_string(inputs.rows()) +
                                    " features, network expects " +
                                    std::to_string(sizes_.front()));
    }
    ForwardCache cache;
    cache.inputs.reserve(layers_.size());
    cache.activations.reserve(layers_.size());
    const Eigen::MatrixXd* current = &inputs;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& layer = layers_[i];
        cache.inputs.push_back(*current);
        Eigen::MatrixXd z = layer.weight * *current;
        z.colwise() += layer.bias;
        if (i + 1 < layers_.size()) {
            z = z.cwiseMax(0.0);
        } else if (output_ == OutputActivation::sigmoid) {
            z = (1.0 + (-z.array()).exp()).inverse().matrix();
        }
        cache.activations.push_back(std::move(z));
        current = &cache.activations.back();
    }
    return cache;
}

Eigen::VectorXd Mlp::predict(const Eigen::VectorXd& input) const {
    return predict_batch(input);
}

Eigen::MatrixXd Mlp::predict_batch(const Eigen::MatrixXd& inputs) const {
    if (inputs.rows() != sizes_.front()) {
        throw std::invalid_argument("input has " + std::to_string(inputs.rows()) +
                                    " features, network expects " +
                                    std::to_string(sizes_.front()));
    }
    Eigen::MatrixXd current = inputs;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        Eigen::MatrixXd z = layers_[i].weight * current;
        z.colwise() += layers_[i].bias;
        if (i + 1 < layers_.size()) {
            current = z.cwiseMax(0.0);
        } else if (output_ == OutputActivation::sigmoid) {
            current = (1.0 + (-z.array()).exp()).inverse().matrix();
        } else {
            current = std::move(z);
        }
    }
    return current;
}

Gradients Mlp::backward(const ForwardCache& cache, const Eigen::MatrixXd& output_error) const {
    if (cache.activations.size() != layers_.size() || output_error.rows() != sizes_.back() ||
        output_error.cols() != cache.output().cols()) {
        throw std::invalid_argument("output error does not match the forward cache");
    }
    Gradients grads;
    grads.weight.resize(layers_.size());
    grads.bias.resize(layers_.size());

    Eigen::MatrixXd delta = output_error;
    if (output_ == OutputActivation::sigmoid) {
        const auto& a = cache.output().array();
        delta = (delta.array() * a * (1.0 - a)).matrix();
    }
    for (std::size_t idx = layers_.size(); idx-- > 0;) {
        grads.weight[idx] = delta * cache.inputs[idx].transpose();
        grads.bias[idx] = delta.rowwise().sum();
        Eigen::MatrixXd upstream = layers_[idx].weight.transpose() * delta;
        if (idx > 0) {
            // relu'(z) = 1 where the hidden activation is positive
            upstream = (upstream.array() * (cache.activations[idx - 1].array() > 0.0).cast<double>())
                           .matrix();
        }
        delta = std::move(upstream);
    }
    grads.input = std::move(delta);
    return grads;
}

Gradients Mlp::zero_gradients() const {
    Gradients g;
    for (const auto& layer : layers_) {
        g.weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
        g.bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
    }
    return g;
}

bool Mlp::all_finite() const {
    for (const auto& layer : layers_) {
        if (!layer.weight.allFinite() || !layer.bias.allFinite()) {
            return false;
        }
    }
    return true;
}

std::vector<double> Mlp::parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const auto& layer : layers_) {
        flat.insert(flat.end(), layer.weight.data(), layer.weight.data() + layer.weight.size());
        flat.insert(flat.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
    }
    return flat;
}

void Mlp::set_parameters(const std::vector<double>& flat) {
    if (flat.size() != parameter_count()) {
        throw std::invalid_argument("parameter vector has wrong length");
    }
    auto it = flat.begin();
    for (auto& layer : layers_) {
        std::copy_n(it, layer.weight.size(), layer.weight.data());
        it += layer.weight.size();
        std::copy_n(it, layer.bias.size(), layer.bias.data());
        it += layer.bias.size();
    }
}

void Mlp::write(std::ostream& out) const {
    out.write(kMagic.data(), kMagic.size());
    write_le<std::uint32_t>(out, kFormatVersion);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(sizes_.size()));
    for (const int s : sizes_) {
        write_le<std::uint32_t>(out, static_cast<std::uint32_t>(s));
    }
    write_le<std::uint8_t>(out, static_cast<std::uint8_t>(output_));
    for (const double p : parameters()) {
        write_le<double>(out, p);
    }
}

Mlp Mlp::read(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw std::runtime_error("not a network weight file (bad magic)");
    }
    if (const auto version = read_le<std::uint32_t>(in); version != kFormatVersion) {
        throw std::runtime_error("unsupported weight file version " + std::to_string(version));
    }
    const auto layer_count = read_le<std::uint32_t>(in);
    if (layer_count < 2 || layer_count > 64) {
        throw std::runtime_error("corrupt weight file: implausible layer count");
    }
    std::vector<int> sizes;
    for (std::uint32_t i = 0; i < layer_count; ++i) {
        const auto s = read_le<std::uint32_t>(in);
        if (s == 0 || s > (1u << 24)) {
            throw std::runtime_error("corrupt weight file: implausible layer size");
        }
        sizes.push_back(static_cast<int>(s));
    }
    const auto act = read_le<std::uint8_t>(in);
    if (act > 1) {
        throw std::runtime_error("corrupt weight file: unknown output activation");
    }
    Mlp net(std::move(sizes), static_cast<OutputActivation>(act));
    std::vector<double> flat(net.parameter_count());
    for (double& p : flat) {
        p = read_le<double>(in);
    }
    net.set_parameters(flat);
    if (!net.all_finite()) {
        throw std::runtime_error("corrupt weight file: non-finite parameter");
    }
    return net;
}

bool operator==(const Mlp& a, const Mlp& b) {
    return a.sizes_ == b.sizes_ && a.output_ == b.output_ && a.parameters() == b.parameters();
}

Optimizer::Optimizer(const Mlp& net, OptimizerConfig config)
    : config_(config), first_(net.zero_gradients()), second_(net.zero_gradients()) {
    if (!(config_.learning_rate > 0.0)) {
        throw std::invalid_argument("learning rate must be positive");
    }
}

void Optimizer::apply(Mlp& net, const Gradients& grads) {
    if (grads.weight.size() != net.layer_count() || first_.weight.size() != net.layer_count()) {
        throw std::invalid_argument("gradient shape mismatch");
    }
    if (!grads.all_finite()) {
        throw DivergenceError("non-finite gradient");
    }
    ++step_;
    const double lr = config_.learning_rate;
    if (config_.algorithm == Algorithm::sgd) {
        for (std::size_t i = 0; i < net.layer_count(); ++i) {
            net.layer(i).weight -= lr * grads.weight[i];
            net.layer(i).bias -= lr * grads.bias[i];
        }
    } else {
        const double b1 = config_.beta1;
        const double b2 = config_.beta2;
        const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
        const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
        auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
            m = b1 * m + (1.0 - b1) * g;
            v = (b2 * v.array() + (1.0 - b2) * g.array().square()).matrix();
            param.array() -= lr * (m.array() / correction1) /
                             ((v.array() / correction2).sqrt() + config_.epsilon);
        };
        for (std::size_t i = 0; i < net.layer_count(); ++i) {
            update(net.layer(i).weight, first_.weight[i], second_.weight[i], grads.weight[i]);
            update(net.layer(i).bias, first_.bias[i], second_.bias[i], grads.bias[i]);
        }
    }
    if (!net.all_finite()) {
        throw DivergenceError("non-finite parameter after update");
    }
}

void save_weights(const Mlp& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write weight file " + path.string());
    }
    net.write(out);
    if (!out) {
        throw std::runtime_error("failed writing weight file " + path.string());
    }
}

Mlp load_weights(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open weight file " + path.string());
    }
    Mlp net = Mlp::read(in);
    if (in.peek() != std::char_traits<char>::eof()) {
        throw std::runtime_error("corrupt weight file: trailing bytes");
    }
    return net;
}

} // namespace adt::nn
