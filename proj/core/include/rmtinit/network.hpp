#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rmtinit/dataset.hpp"

namespace rmtinit {

enum class OutputActivation { sigmoid, linear };

/// Bias-free feedforward network. Layer L maps fan_in(L) -> fan_out(L) and
/// is stored as a fan_in x fan_out matrix; hidden layers are sigmoid.
struct Network {
    std::vector<Eigen::MatrixXd> layers;
    OutputActivation output = OutputActivation::sigmoid;

    /// Throws std::invalid_argument when adjacent shapes do not compose.
    void validate() const;
    Eigen::Index input_dim() const { return layers.empty() ? 0 : layers.front().rows(); }
    Eigen::Index output_dim() const { return layers.empty() ? 0 : layers.back().cols(); }
    Eigen::Index parameter_count() const;

    Eigen::VectorXd flatten() const;
    void assign(const Eigen::VectorXd& params);
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z);

/// Activations of every layer for a batch (samples in rows), input excluded.
std::vector<Eigen::MatrixXd> forward(const Network& net, const Eigen::MatrixXd& batch);

Eigen::MatrixXd predict(const Network& net, const Eigen::MatrixXd& batch);

Eigen::MatrixXd one_hot(std::span<const int> labels, int class_count);

/// E = (1/N_samp) sum_i sum_j (target_ij - y_ij)^2.
double mse_error(const Network& net, const Eigen::MatrixXd& batch, const Eigen::MatrixXd& targets);
double mse_error(const Network& net, const LabeledDataset& ds);

/// Exact gradient of mse_error by backpropagation, one matrix per layer.
std::vector<Eigen::MatrixXd> gradient(const Network& net, const Eigen::MatrixXd& batch,
                                      const Eigen::MatrixXd& targets);

/// Gradient and error from one forward pass, gradient flattened like Network::flatten.
double error_and_gradient(const Network& net, const Eigen::MatrixXd& batch, const Eigen::MatrixXd& targets,
                          Eigen::VectorXd& flat_gradient);

/// Uniform [-1, 1], then every unit's incoming weight vector (a column) is
/// rescaled to norm 0.7 * fan_out^{1/fan_in}.
Eigen::MatrixXd nguyen_widrow_init(Eigen::Index fan_in, Eigen::Index fan_out, std::uint64_t seed);

/// Uniform in +- sqrt(6 / (fan_in + fan_out)).
Eigen::MatrixXd xavier_init(Eigen::Index fan_in, Eigen::Index fan_out, std::uint64_t seed);

/// Argmax class per row; ties go to the lowest index.
std::vector<int> predicted_classes(const Eigen::MatrixXd& outputs);

double accuracy_of(const Eigen::MatrixXd& outputs, std::span<const int> labels);

double evaluate(const Network& net, const LabeledDataset& test_set);

}  // namespace rmtinit
