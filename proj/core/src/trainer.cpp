#include "rmtinit/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace rmtinit {

std::string_view to_string(TrainMethod m) { return m == TrainMethod::cg ? "cg" : "sgd"; }

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::goal: return "goal";
        case StopReason::max_epochs: return "max_epochs";
        case StopReason::grad_tol: return "grad_tol";
        case StopReason::divergence: return "divergence";
    }
    return "unknown";
}

TrainMethod parse_train_method(std::string_view s) {
    if (s == "cg") return TrainMethod::cg;
    if (s == "sgd") return TrainMethod::sgd;
    throw std::invalid_argument("unknown train method '" + std::string(s) + "'");
}

namespace {

struct Objective {
    Network& net;
    const Eigen::MatrixXd& x;
    const Eigen::MatrixXd& t;

    double value(const Eigen::VectorXd& p) {
        net.assign(p);
        return mse_error(net, x, t);
    }
    double value_and_gradient(const Eigen::VectorXd& p, Eigen::VectorXd& g) {
        net.assign(p);
        return error_and_gradient(net, x, t, g);
    }
};

void finish(TrainReport& r, StopReason reason) {
    r.stop_reason = reason;
    r.converged = reason == StopReason::goal;
}

/// Returns true and fills (r, p, e) when a stop criterion holds.
bool check_stop(TrainReport& r, double error, double grad_norm, const StopCriteria& stop) {
    if (!std::isfinite(error) || !std::isfinite(grad_norm)) {
        finish(r, StopReason::divergence);
        return true;
    }
    if (error < stop.goal) {
        finish(r, StopReason::goal);
        return true;
    }
    if (grad_norm < stop.grad_tol) {
        finish(r, StopReason::grad_tol);
        return true;
    }
    if (r.epochs >= stop.max_epochs) {
        finish(r, StopReason::max_epochs);
        return true;
    }
    return false;
}

void train_cg(Network& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& t, const TrainOptions& opt,
              TrainReport& r) {
    Objective obj{net, x, t};
    Eigen::VectorXd p = net.flatten();
    Eigen::VectorXd g;
    double e = obj.value_and_gradient(p, g);
    r.error_history.push_back(e);
    if (check_stop(r, e, g.norm(), opt.stop)) {
        r.final_error = e;
        net.assign(p);
        return;
    }

    const Eigen::Index restart_period = std::max<Eigen::Index>(1, p.size());
    Eigen::VectorXd d = -g;
    Eigen::Index since_restart = 0;
    double alpha_prev = 1.0 / std::max(g.norm(), 1e-300);
    double slope_prev = g.dot(d);
    bool steepest = true;

    while (true) {
        double slope = g.dot(d);
        if (!(slope < 0)) {
            d = -g;
            slope = -g.squaredNorm();
            steepest = true;
            since_restart = 0;
        }
        double alpha = steepest && r.epochs == 0 ? 1.0 / std::max(d.norm(), 1e-300)
                                                 : alpha_prev * slope_prev / slope;
        if (!(alpha > 0) || !std::isfinite(alpha)) alpha = 1.0 / std::max(d.norm(), 1e-300);

        // Armijo backtracking from the previous step's scaled length.
        double e_new = obj.value(p + alpha * d);
        bool accepted = std::isfinite(e_new) && e_new <= e + opt.armijo_c * alpha * slope;
        for (int k = 0; k < 60 && !accepted; ++k) {
            alpha *= 0.5;
            e_new = obj.value(p + alpha * d);
            accepted = std::isfinite(e_new) && e_new <= e + opt.armijo_c * alpha * slope;
        }
        if (!accepted || !(e_new <= e)) {
            if (!steepest) {
                d = -g;
                steepest = true;
                since_restart = 0;
                continue;
            }
            // no representable descent left along -g
            finish(r, StopReason::grad_tol);
            break;
        }

        p += alpha * d;
        Eigen::VectorXd g_new;
        e = obj.value_and_gradient(p, g_new);
        ++r.epochs;
        r.error_history.push_back(e);
        if (check_stop(r, e, g_new.norm(), opt.stop)) break;

        ++since_restart;
        double beta = std::max(0.0, g_new.dot(g_new - g) / g.squaredNorm());
        if (since_restart >= restart_period) {
            beta = 0.0;
            since_restart = 0;
        }
        alpha_prev = alpha;
        slope_prev = slope;
        d = -g_new + beta * d;
        steepest = beta == 0.0;
        g = std::move(g_new);
    }
    net.assign(p);
    r.final_error = e;
}

void train_sgd(Network& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& t, const TrainOptions& opt,
               std::uint64_t seed, TrainReport& r) {
    if (opt.batch_size < 1) throw std::invalid_argument("train: batch size must be positive");
    std::mt19937_64 rng(seed);
    Eigen::VectorXd g;
    double e = error_and_gradient(net, x, t, g);
    r.error_history.push_back(e);
    if (check_stop(r, e, g.norm(), opt.stop)) {
        r.final_error = e;
        return;
    }
    const Eigen::Index n = x.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Eigen::VectorXd velocity = Eigen::VectorXd::Zero(net.parameter_count());
    Eigen::VectorXd p = net.flatten();
    while (true) {
        std::shuffle(order.begin(), order.end(), rng);
        for (Eigen::Index start = 0; start < n; start += opt.batch_size) {
            const Eigen::Index len = std::min<Eigen::Index>(opt.batch_size, n - start);
            Eigen::MatrixXd xb(len, x.cols()), tb(len, t.cols());
            for (Eigen::Index k = 0; k < len; ++k) {
                xb.row(k) = x.row(order[start + k]);
                tb.row(k) = t.row(order[start + k]);
            }
            Eigen::VectorXd gb;
            error_and_gradient(net, xb, tb, gb);
            velocity = opt.momentum * velocity - opt.learning_rate * gb;
            p += velocity;
            net.assign(p);
        }
        e = error_and_gradient(net, x, t, g);
        ++r.epochs;
        r.error_history.push_back(e);
        if (check_stop(r, e, g.norm(), opt.stop)) break;
    }
    r.final_error = e;
}

}  // namespace

TrainReport train(Network& net, const LabeledDataset& train_set, const TrainOptions& options, std::uint64_t seed) {
    net.validate();
    if (train_set.dimension() != net.input_dim()) throw std::invalid_argument("train: input width mismatch");
    if (train_set.class_count > net.output_dim())
        throw std::invalid_argument("train: fewer output nodes than classes");
    const Eigen::MatrixXd targets = one_hot(train_set.labels, static_cast<int>(net.output_dim()));
    TrainReport r;
    r.seed = seed;
    if (options.method == TrainMethod::cg) train_cg(net, train_set.features, targets, options, r);
    else train_sgd(net, train_set.features, targets, options, seed, r);
    r.accuracy = std::isfinite(r.final_error) ? evaluate(net, train_set) : 0.0;
    return r;
}

}  // namespace rmtinit
