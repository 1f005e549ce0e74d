#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rmtinit/dataset.hpp"
#include "rmtinit/network.hpp"

namespace rmtinit {

enum class TrainMethod { cg, sgd };
enum class StopReason { goal, max_epochs, grad_tol, divergence };

std::string_view to_string(TrainMethod m);
std::string_view to_string(StopReason r);
TrainMethod parse_train_method(std::string_view s);

struct StopCriteria {
    double goal = 1e-3;
    int max_epochs = 500;
    double grad_tol = 1e-6;
};

struct TrainOptions {
    TrainMethod method = TrainMethod::cg;
    StopCriteria stop;
    int batch_size = 32;         // sgd
    double learning_rate = 0.1;  // sgd
    double momentum = 0.9;       // sgd
    double armijo_c = 1e-4;      // cg
};

struct TrainReport {
    int epochs = 0;
    double final_error = 0.0;
    bool converged = false;  // exactly when stop_reason == goal
    StopReason stop_reason = StopReason::max_epochs;
    double accuracy = 0.0;   // training-set accuracy after train(); the harness stores test accuracy
    std::string initializer;
    std::uint64_t seed = 0;
    std::vector<double> error_history;  // full-batch error, index 0 = before training
};

/// cg: full-batch Polak-Ribiere (clamped at zero) nonlinear conjugate
/// gradient with Armijo backtracking; restarts every parameter_count steps or
/// on a non-descent direction. One epoch is one accepted step. A line search
/// that cannot decrease the error even along steepest descent ends training
/// with grad_tol.
/// sgd: shuffled mini-batches with momentum; one epoch is one full pass.
/// The first satisfied criterion (checked from epoch 0) stops training.
TrainReport train(Network& net, const LabeledDataset& train_set, const TrainOptions& options, std::uint64_t seed);

}  // namespace rmtinit
