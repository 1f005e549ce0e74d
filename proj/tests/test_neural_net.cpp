#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rmtinit/dataset.hpp"
#include "rmtinit/network.hpp"
#include "rmtinit/trainer.hpp"

using namespace rmtinit;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double sd = 1.0) {
    std::normal_distribution<double> g(0.0, sd);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
    return m;
}

Network random_net(std::mt19937_64& rng, std::vector<int> widths, OutputActivation out = OutputActivation::sigmoid) {
    Network net;
    net.output = out;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) net.layers.push_back(gaussian(widths[l], widths[l + 1], rng));
    return net;
}

LabeledDataset separable_toy() {
    // two classes on either side of the line x0 = x1 (no bias needed)
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::MatrixXd x(40, 2);
    std::vector<int> labels(40);
    for (int i = 0; i < 40; ++i) {
        double a = u(rng), b = u(rng);
        if (std::abs(a - b) < 0.3) b = a + (i % 2 ? 0.3 : -0.3);
        x(i, 0) = a;
        x(i, 1) = b;
        labels[i] = a > b ? 0 : 1;
    }
    return make_dataset(x, labels, 2, "toy");
}

}  // namespace

TEST_CASE("forward pass basics") {
    Network net;
    net.layers = {Eigen::MatrixXd::Zero(3, 4), Eigen::MatrixXd::Zero(4, 2)};
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 3);
    for (const auto& a : forward(net, x)) CHECK((a.array() == 0.5).all());

    std::mt19937_64 rng(1);
    Network lin;
    lin.output = OutputActivation::linear;
    lin.layers = {gaussian(3, 2, rng)};
    CHECK(predict(lin, x) == x * lin.layers[0]);

    Network bad;
    bad.layers = {Eigen::MatrixXd::Zero(3, 4), Eigen::MatrixXd::Zero(5, 2)};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS(forward(lin, Eigen::MatrixXd::Zero(2, 4)));
}

TEST_CASE("pre-activation is monotone in a positively weighted input") {
    Network net;
    net.output = OutputActivation::linear;
    net.layers = {Eigen::MatrixXd::Constant(3, 1, 0.4)};
    Eigen::MatrixXd x(1, 3);
    x << 0.1, 0.2, 0.3;
    const double before = predict(net, x)(0, 0);
    x(0, 1) += 0.5;
    CHECK(predict(net, x)(0, 0) > before);
}

TEST_CASE("mse error closed forms") {
    const std::vector<int> labels{0, 1, 2, 2};
    const Eigen::MatrixXd targets = one_hot(labels, 3);
    Network lin;
    lin.output = OutputActivation::linear;
    lin.layers = {Eigen::MatrixXd::Identity(3, 3)};
    CHECK(mse_error(lin, targets, targets) == 0.0);

    Network half;
    half.layers = {Eigen::MatrixXd::Zero(3, 3)};
    CHECK(mse_error(half, targets, targets) == doctest::Approx(0.25 * 3));

    std::mt19937_64 rng(2);
    const auto net = random_net(rng, {3, 4, 3});
    const Eigen::MatrixXd x = gaussian(4, 3, rng);
    Eigen::MatrixXd x2(8, 3), t2(8, 3);
    x2 << x, x;
    t2 << targets, targets;
    CHECK(mse_error(net, x2, t2) == doctest::Approx(mse_error(net, x, targets)).epsilon(1e-14));
}

TEST_CASE("backprop agrees with central differences on random nets") {
    std::mt19937_64 rng(3);
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
        auto net = random_net(rng, {3, 4, 2}, trial % 4 == 3 ? OutputActivation::linear : OutputActivation::sigmoid);
        const Eigen::MatrixXd x = gaussian(7, 3, rng);
        std::vector<int> labels(7);
        for (int i = 0; i < 7; ++i) labels[i] = (i + trial) % 2;
        const Eigen::MatrixXd t = one_hot(labels, 2);
        Eigen::VectorXd grad;
        error_and_gradient(net, x, t, grad);
        const Eigen::VectorXd p = net.flatten();
        for (Eigen::Index k = 0; k < p.size(); ++k) {
            Network a = net, b = net;
            Eigen::VectorXd pa = p, pb = p;
            pa[k] += 1e-5;
            pb[k] -= 1e-5;
            a.assign(pa);
            b.assign(pb);
            const double fd = (mse_error(a, x, t) - mse_error(b, x, t)) / 2e-5;
            const double rel = std::abs(fd - grad[k]) / std::max(std::abs(fd), 1e-6);
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("per-layer gradient matches the flat gradient") {
    std::mt19937_64 rng(5);
    const auto net = random_net(rng, {4, 3, 3, 2});
    const Eigen::MatrixXd x = gaussian(6, 4, rng);
    const Eigen::MatrixXd t = one_hot(std::vector<int>{0, 1, 0, 1, 1, 0}, 2);
    const auto per_layer = gradient(net, x, t);
    Eigen::VectorXd flat;
    error_and_gradient(net, x, t, flat);
    Network holder = net;
    holder.layers = per_layer;
    CHECK((holder.flatten() - flat).norm() <= 1e-14);
}

TEST_CASE("gradient vanishes at a residual-free point and ignores duplication") {
    Network half;
    half.layers = {Eigen::MatrixXd::Zero(2, 2)};
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 2);
    const Eigen::MatrixXd t = Eigen::MatrixXd::Constant(3, 2, 0.5);
    Eigen::VectorXd g;
    CHECK(error_and_gradient(half, x, t, g) == 0.0);
    CHECK(g.norm() == 0.0);

    std::mt19937_64 rng(6);
    const auto net = random_net(rng, {2, 3, 2});
    const Eigen::MatrixXd t1 = one_hot(std::vector<int>{0, 1, 1}, 2);
    Eigen::MatrixXd x2(6, 2), t2(6, 2);
    x2 << x, x;
    t2 << t1, t1;
    Eigen::VectorXd g1, g2;
    error_and_gradient(net, x, t1, g1);
    error_and_gradient(net, x2, t2, g2);
    CHECK((g1 - g2).norm() <= 1e-14 * (1 + g1.norm()));
}

TEST_CASE("baseline initializers") {
    for (auto [fi, fo] : {std::pair{5, 3}, std::pair{64, 10}, std::pair{1, 1}}) {
        const auto w = nguyen_widrow_init(fi, fo, 7);
        const double beta = 0.7 * std::pow(static_cast<double>(fo), 1.0 / fi);
        for (Eigen::Index j = 0; j < w.cols(); ++j) CHECK(std::abs(w.col(j).norm() - beta) <= 1e-12);
        const auto x = xavier_init(fi, fo, 7);
        const double bound = std::sqrt(6.0 / (fi + fo));
        CHECK(x.cwiseAbs().maxCoeff() <= bound);
        CHECK(x.rows() == fi);
        CHECK(x.cols() == fo);
    }
    CHECK(nguyen_widrow_init(1, 1, 3).norm() == doctest::Approx(0.7));
    CHECK(nguyen_widrow_init(4, 4, 3) == nguyen_widrow_init(4, 4, 3));
    CHECK_THROWS(xavier_init(0, 3, 1));
}

TEST_CASE("evaluate: argmax with lowest-index ties") {
    Eigen::MatrixXd out = one_hot(std::vector<int>{2, 0, 1}, 3);
    CHECK(accuracy_of(out, std::vector<int>{2, 0, 1}) == 1.0);
    const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(4, 3, 0.3);
    CHECK(accuracy_of(flat, std::vector<int>{0, 1, 0, 2}) == 0.5);
    CHECK(predicted_classes(flat) == std::vector<int>{0, 0, 0, 0});

    std::mt19937_64 rng(8);
    const auto net = random_net(rng, {3, 3});
    const Eigen::MatrixXd x = gaussian(12, 3, rng);
    std::vector<int> labels(12);
    for (int i = 0; i < 12; ++i) labels[i] = i % 3;
    const auto ds = make_dataset(x, labels, 3, "perm");
    const double base = evaluate(net, ds);
    // relabel c -> (c+1)%3 and permute output columns the same way
    Network permuted = net;
    for (int c = 0; c < 3; ++c) permuted.layers[0].col((c + 1) % 3) = net.layers[0].col(c);
    std::vector<int> relabeled(12);
    for (int i = 0; i < 12; ++i) relabeled[i] = (labels[i] + 1) % 3;
    CHECK(evaluate(permuted, make_dataset(x, relabeled, 3, "perm")) == base);
}

TEST_CASE("training stops at epoch 0 when already converged") {
    const auto ds = make_dataset(Eigen::MatrixXd::Identity(2, 2), {0, 1}, 2, "id");
    Network net;
    net.output = OutputActivation::linear;
    net.layers = {Eigen::MatrixXd::Identity(2, 2)};
    for (auto method : {TrainMethod::cg, TrainMethod::sgd}) {
        TrainOptions opt;
        opt.method = method;
        Network copy = net;
        const auto r = train(copy, ds, opt, 1);
        CHECK(r.epochs == 0);
        CHECK(r.converged);
        CHECK(r.stop_reason == StopReason::goal);
    }
}

TEST_CASE("cg reaches the goal on a separable toy with monotone error") {
    const auto ds = separable_toy();
    Network net;
    net.layers = {xavier_init(2, 2, 3)};
    TrainOptions opt;
    opt.stop.goal = 0.05;
    const auto r = train(net, ds, opt, 1);
    CHECK(r.converged);
    CHECK(r.epochs <= 500);
    CHECK(r.accuracy == 1.0);
    for (std::size_t i = 1; i < r.error_history.size(); ++i) CHECK(r.error_history[i] <= r.error_history[i - 1]);
    CHECK(r.converged == (r.stop_reason == StopReason::goal));
}

TEST_CASE("cg error is non-increasing on a harder problem") {
    const auto ds = standardize(synth_generate(4, 6, 20, 2.0, 3));
    Network net;
    net.layers = {nguyen_widrow_init(6, 5, 1), nguyen_widrow_init(5, 4, 2)};
    TrainOptions opt;
    opt.stop.max_epochs = 200;
    const auto r = train(net, ds, opt, 9);
    for (std::size_t i = 1; i < r.error_history.size(); ++i) CHECK(r.error_history[i] <= r.error_history[i - 1]);
    CHECK(r.epochs == static_cast<int>(r.error_history.size()) - 1);
}

TEST_CASE("sgd is deterministic per seed and learns") {
    const auto ds = separable_toy();
    TrainOptions opt;
    opt.method = TrainMethod::sgd;
    opt.stop.max_epochs = 60;
    Network a, b, c;
    a.layers = b.layers = c.layers = {xavier_init(2, 2, 5)};
    const auto ra = train(a, ds, opt, 11);
    const auto rb = train(b, ds, opt, 11);
    const auto rc = train(c, ds, opt, 12);
    CHECK(ra.error_history == rb.error_history);
    CHECK(a.layers[0] == b.layers[0]);
    CHECK(ra.error_history != rc.error_history);
    CHECK(ra.final_error < ra.error_history.front());
}

TEST_CASE("divergence is reported") {
    const auto ds = separable_toy();
    Network net;
    net.output = OutputActivation::linear;
    net.layers = {Eigen::MatrixXd::Constant(2, 2, 1.0)};
    TrainOptions opt;
    opt.method = TrainMethod::sgd;
    opt.learning_rate = 1e6;
    opt.momentum = 0.9;
    const auto r = train(net, ds, opt, 1);
    CHECK(r.stop_reason == StopReason::divergence);
    CHECK_FALSE(r.converged);
}

TEST_CASE("train method names") {
    CHECK(parse_train_method("cg") == TrainMethod::cg);
    CHECK(to_string(StopReason::grad_tol) == "grad_tol");
    CHECK_THROWS(parse_train_method("lbfgs"));
}
