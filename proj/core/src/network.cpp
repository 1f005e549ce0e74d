#include "rmtinit/network.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace rmtinit {

void Network::validate() const {
    if (layers.empty()) throw std::invalid_argument("Network: no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].rows() < 1 || layers[l].cols() < 1)
            throw std::invalid_argument("Network: empty layer " + std::to_string(l));
        if (l > 0 && layers[l].rows() != layers[l - 1].cols())
            throw std::invalid_argument("Network: layer " + std::to_string(l) + " fan_in does not match previous fan_out");
    }
}

Eigen::Index Network::parameter_count() const {
    Eigen::Index n = 0;
    for (const auto& w : layers) n += w.size();
    return n;
}

Eigen::VectorXd Network::flatten() const {
    Eigen::VectorXd p(parameter_count());
    Eigen::Index off = 0;
    for (const auto& w : layers) {
        p.segment(off, w.size()) = w.reshaped();
        off += w.size();
    }
    return p;
}

void Network::assign(const Eigen::VectorXd& p) {
    if (p.size() != parameter_count()) throw std::invalid_argument("Network::assign: size mismatch");
    Eigen::Index off = 0;
    for (auto& w : layers) {
        w.reshaped() = p.segment(off, w.size());
        off += w.size();
    }
}

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double v) { return sigmoid(v); });
}

std::vector<Eigen::MatrixXd> forward(const Network& net, const Eigen::MatrixXd& batch) {
    if (net.layers.empty()) throw std::invalid_argument("forward: network has no layers");
    if (batch.cols() != net.input_dim()) throw std::invalid_argument("forward: batch width does not match fan_in");
    std::vector<Eigen::MatrixXd> acts;
    acts.reserve(net.layers.size());
    const Eigen::MatrixXd* input = &batch;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        Eigen::MatrixXd z = *input * net.layers[l];
        const bool last = l + 1 == net.layers.size();
        acts.push_back(last && net.output == OutputActivation::linear ? std::move(z) : sigmoid(z));
        input = &acts.back();
    }
    return acts;
}

Eigen::MatrixXd predict(const Network& net, const Eigen::MatrixXd& batch) { return forward(net, batch).back(); }

Eigen::MatrixXd one_hot(std::span<const int> labels, int class_count) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), class_count);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= class_count) throw std::invalid_argument("one_hot: label out of range");
        t(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
    }
    return t;
}

double mse_error(const Network& net, const Eigen::MatrixXd& batch, const Eigen::MatrixXd& targets) {
    const Eigen::MatrixXd y = predict(net, batch);
    if (y.rows() != targets.rows() || y.cols() != targets.cols())
        throw std::invalid_argument("mse_error: target shape mismatch");
    return (targets - y).squaredNorm() / static_cast<double>(batch.rows());
}

double mse_error(const Network& net, const LabeledDataset& ds) {
    return mse_error(net, ds.features, one_hot(ds.labels, static_cast<int>(net.output_dim())));
}

std::vector<Eigen::MatrixXd> gradient(const Network& net, const Eigen::MatrixXd& batch,
                                      const Eigen::MatrixXd& targets) {
    const auto acts = forward(net, batch);
    if (acts.back().rows() != targets.rows() || acts.back().cols() != targets.cols())
        throw std::invalid_argument("gradient: target shape mismatch");
    const std::size_t layers = net.layers.size();
    std::vector<Eigen::MatrixXd> grads(layers);
    Eigen::MatrixXd delta = (2.0 / static_cast<double>(batch.rows())) * (acts.back() - targets);
    if (net.output == OutputActivation::sigmoid)
        delta.array() *= acts.back().array() * (1.0 - acts.back().array());
    for (std::size_t l = layers; l-- > 0;) {
        const Eigen::MatrixXd& input = l == 0 ? batch : acts[l - 1];
        grads[l] = input.transpose() * delta;
        if (l > 0) {
            Eigen::MatrixXd back = delta * net.layers[l].transpose();
            back.array() *= acts[l - 1].array() * (1.0 - acts[l - 1].array());
            delta = std::move(back);
        }
    }
    return grads;
}

double error_and_gradient(const Network& net, const Eigen::MatrixXd& batch, const Eigen::MatrixXd& targets,
                          Eigen::VectorXd& flat) {
    const auto grads = gradient(net, batch, targets);
    flat.resize(net.parameter_count());
    Eigen::Index off = 0;
    for (const auto& g : grads) {
        flat.segment(off, g.size()) = g.reshaped();
        off += g.size();
    }
    return mse_error(net, batch, targets);
}

Eigen::MatrixXd nguyen_widrow_init(Eigen::Index fan_in, Eigen::Index fan_out, std::uint64_t seed) {
    if (fan_in < 1 || fan_out < 1) throw std::invalid_argument("nguyen_widrow_init: dimensions must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd w(fan_in, fan_out);
    for (Eigen::Index j = 0; j < fan_out; ++j)
        for (Eigen::Index i = 0; i < fan_in; ++i) w(i, j) = u(rng);
    const double beta = 0.7 * std::pow(static_cast<double>(fan_out), 1.0 / static_cast<double>(fan_in));
    for (Eigen::Index j = 0; j < fan_out; ++j) {
        const double norm = w.col(j).norm();
        if (norm > 0) w.col(j) *= beta / norm;
        else w(0, j) = beta;
    }
    return w;
}

Eigen::MatrixXd xavier_init(Eigen::Index fan_in, Eigen::Index fan_out, std::uint64_t seed) {
    if (fan_in < 1 || fan_out < 1) throw std::invalid_argument("xavier_init: dimensions must be positive");
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-bound, bound);
    Eigen::MatrixXd w(fan_in, fan_out);
    for (Eigen::Index j = 0; j < fan_out; ++j)
        for (Eigen::Index i = 0; i < fan_in; ++i) w(i, j) = u(rng);
    return w;
}

std::vector<int> predicted_classes(const Eigen::MatrixXd& outputs) {
    std::vector<int> out(static_cast<std::size_t>(outputs.rows()));
    for (Eigen::Index i = 0; i < outputs.rows(); ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < outputs.cols(); ++j)
            if (outputs(i, j) > outputs(i, best)) best = j;
        out[i] = static_cast<int>(best);
    }
    return out;
}

double accuracy_of(const Eigen::MatrixXd& outputs, std::span<const int> labels) {
    if (static_cast<std::size_t>(outputs.rows()) != labels.size())
        throw std::invalid_argument("accuracy_of: label count mismatch");
    if (labels.empty()) return 0.0;
    const auto pred = predicted_classes(outputs);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) correct += pred[i] == labels[i];
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double evaluate(const Network& net, const LabeledDataset& test_set) {
    return accuracy_of(predict(net, test_set.features), test_set.labels);
}

}  // namespace rmtinit
