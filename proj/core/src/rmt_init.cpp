#include "rmtinit/rmt_init.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "rmtinit/kmeans.hpp"
#include "rmtinit/landscape.hpp"
#include "rmtinit/parallel.hpp"

namespace rmtinit {

std::vector<double> default_ratio_grid() {
    std::vector<double> g(30);
    for (int i = 0; i < 30; ++i) g[i] = 0.1 + 0.1 * i;
    return g;
}

std::string_view to_string(DrawMode m) { return m == DrawMode::deterministic ? "deterministic" : "stochastic"; }
std::string_view to_string(RatioPolicy p) { return p == RatioPolicy::per_dimension ? "per_dimension" : "scalar"; }

DrawMode parse_draw_mode(std::string_view s) {
    if (s == "deterministic") return DrawMode::deterministic;
    if (s == "stochastic") return DrawMode::stochastic;
    throw std::invalid_argument("unknown init.mode '" + std::string(s) + "'");
}

RatioPolicy parse_ratio_policy(std::string_view s) {
    if (s == "per_dimension") return RatioPolicy::per_dimension;
    if (s == "scalar") return RatioPolicy::scalar;
    throw std::invalid_argument("unknown init.ratio_policy '" + std::string(s) + "'");
}

SaturationCurve saturation_curve(const PainleveSolution& sol, int n, std::span<const double> ratio_grid) {
    SaturationCurve c;
    c.ratios.assign(ratio_grid.begin(), ratio_grid.end());
    c.argmax_index.reserve(c.ratios.size());
    for (double r : c.ratios) c.argmax_index.push_back(h_n_argmax_index(sol, n, r));
    if (c.argmax_index.size() >= 2) {
        std::size_t k = c.argmax_index.size() - 1;
        while (k > 0 && c.argmax_index[k - 1] == c.argmax_index.back()) --k;
        if (k + 1 < c.argmax_index.size()) c.saturation_position = k;
    }
    return c;
}

namespace {

double median(std::span<const double> v) {
    if (v.empty()) return 1.0;
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    const std::size_t m = s.size() / 2;
    return s.size() % 2 ? s[m] : 0.5 * (s[m - 1] + s[m]);
}

}  // namespace

RatioSelection select_mu_ratio(const PainleveSolution& sol, int n, std::span<const double> mu_c,
                               std::span<const double> ratio_grid) {
    if (ratio_grid.size() < 30) throw std::invalid_argument("select_mu_ratio: ratio grid needs >= 30 points");
    const auto [lo, hi] = std::minmax_element(ratio_grid.begin(), ratio_grid.end());
    if (*lo > 0.1 + 1e-12 || *hi < 3.0 - 1e-12)
        throw std::invalid_argument("select_mu_ratio: ratio grid must span [0.1, 3.0]");
    if (!std::is_sorted(ratio_grid.begin(), ratio_grid.end()))
        throw std::invalid_argument("select_mu_ratio: ratio grid must be increasing");

    RatioSelection sel;
    sel.curve = saturation_curve(sol, n, ratio_grid);
    const auto& r = sel.curve.ratios;
    if (sel.curve.saturation_position) {
        const std::size_t k = *sel.curve.saturation_position;
        sel.r_sat = r[k];
        if (k == 0) {
            sel.ratio = 0.8;
            sel.fallback = true;
        } else {
            sel.ratio = 0.5 * (r.front() + r[k]);
        }
    } else {
        sel.ratio = 0.5 * (r.front() + r.back());
    }
    sel.mu = sel.ratio * median(mu_c);
    return sel;
}

double InitPlan::hypercube_volume() const {
    double v = 1.0;
    for (const auto& [a, b] : hypercube) v *= b - a;
    return v;
}

InitPlan compute_class_u(const PainleveSolution& sol, const Eigen::MatrixXd& samples, const InitConfig& config,
                         int group_id) {
    if (samples.rows() < 3) throw std::invalid_argument("compute_class_u: need at least 3 samples");
    const Eigen::Index dim = samples.cols();
    const int n = std::max<int>(2, static_cast<int>(dim));

    InitPlan plan;
    plan.group_id = group_id;
    plan.mu_c = estimate_mu_c(samples);

    double ratio = 0.0, mu = 0.0;
    if (config.fixed_ratio) {
        ratio = *config.fixed_ratio;
        mu = ratio * median(plan.mu_c);
    } else {
        const RatioSelection sel = select_mu_ratio(sol, n, plan.mu_c, config.ratio_grid);
        ratio = sel.ratio;
        mu = sel.mu;
    }

    const double t_lo = sol.t_min(), t_hi = sol.t_max();
    const double cell = (t_hi - t_lo) / static_cast<double>(sol.size() - 1);
    plan.u.resize(dim);
    plan.hypercube.resize(dim);
    plan.argmax_t.resize(dim);
    plan.ratios.resize(dim);
    plan.ranges.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double r_i = config.ratio_policy == RatioPolicy::per_dimension ? mu / plan.mu_c[i] : ratio;
        plan.ratios[i] = r_i;
        const std::size_t k = h_n_argmax_index(sol, n, r_i);
        const double t_star = sol.grid()[k];
        plan.argmax_t[i] = t_star;
        const double lo = samples.col(i).minCoeff(), hi = samples.col(i).maxCoeff();
        const double range = hi - lo;
        plan.ranges[i] = range;
        if (range > 0) {
            const double frac = (t_star - t_lo) / (t_hi - t_lo);
            plan.u[i] = std::clamp(lo + frac * range, lo, hi);
            const double delta = cell / (t_hi - t_lo) * range;
            plan.hypercube[i] = {plan.u[i] - delta, plan.u[i] + delta};
        } else {
            plan.u[i] = lo;
            plan.hypercube[i] = {lo, lo};
        }
    }
    plan.weights = u_to_weights(plan.u, plan.ranges);
    return plan;
}

std::vector<double> draw_u_from_hypercube(const InitPlan& plan, DrawMode mode, std::uint64_t seed) {
    if (mode == DrawMode::deterministic) return plan.u;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> out(plan.u.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto [a, b] = plan.hypercube[i];
        out[i] = b > a ? std::clamp(a + unit(rng) * (b - a), a, b) : plan.u[i];
    }
    return out;
}

std::vector<double> u_to_weights(std::span<const double> u, std::span<const double> ranges) {
    if (u.size() != ranges.size()) throw std::invalid_argument("u_to_weights: length mismatch");
    std::vector<double> w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = ranges[i] > 0 ? u[i] / ranges[i] : 0.0;
    return w;
}

LayerInit init_layer(const PainleveSolution& sol, const Eigen::MatrixXd& inputs, std::span<const int> labels,
                     int fan_out, const InitConfig& config, int layer_index) {
    if (fan_out <= 0) throw std::invalid_argument("init_layer: fan_out must be positive");
    if (static_cast<Eigen::Index>(labels.size()) != inputs.rows())
        throw std::invalid_argument("init_layer: label count does not match inputs");

    LayerInit layer;
    layer.layer_index = layer_index;
    layer.fan_out = fan_out;
    const std::set<int> distinct(labels.begin(), labels.end());
    const bool by_label = static_cast<int>(distinct.size()) == fan_out && *distinct.begin() == 0 &&
                          *distinct.rbegin() == fan_out - 1;
    layer.grouped_by_label = by_label;
    if (by_label) {
        layer.grouping.assign(labels.begin(), labels.end());
    } else {
        const auto km = kmeans(inputs, fan_out, derive_seed(config.seed, "kmeans:" + std::to_string(layer_index)),
                               config.kmeans_max_iterations);
        layer.grouping = km.assignments;
    }

    layer.weight_matrix = Eigen::MatrixXd::Zero(inputs.cols(), fan_out);
    layer.plans.resize(fan_out);
    for (int g = 0; g < fan_out; ++g) {
        std::vector<Eigen::Index> rows;
        for (std::size_t i = 0; i < layer.grouping.size(); ++i)
            if (layer.grouping[i] == g) rows.push_back(static_cast<Eigen::Index>(i));
        Eigen::MatrixXd samples(static_cast<Eigen::Index>(rows.size()), inputs.cols());
        for (std::size_t k = 0; k < rows.size(); ++k) samples.row(k) = inputs.row(rows[k]);

        InitPlan plan;
        if (samples.rows() >= 3) {
            plan = compute_class_u(sol, samples, config, g);
        } else {
            // Too few members for a covariance: isotropic mu_c and the fixed ratio rule.
            layer.warnings.push_back("layer " + std::to_string(layer_index) + " group " + std::to_string(g) +
                                     " has " + std::to_string(samples.rows()) + " samples; using unit mu_c");
            plan.group_id = g;
            const Eigen::Index dim = inputs.cols();
            plan.mu_c.assign(dim, 1.0);
            plan.u.assign(dim, 0.0);
            plan.ranges.assign(dim, 0.0);
            plan.ratios.assign(dim, 0.0);
            plan.argmax_t.assign(dim, sol.t_min());
            plan.hypercube.assign(dim, {0.0, 0.0});
            if (samples.rows() > 0)
                for (Eigen::Index i = 0; i < dim; ++i) {
                    plan.u[i] = samples.col(i).minCoeff();
                    plan.hypercube[i] = {plan.u[i], plan.u[i]};
                }
            plan.weights = u_to_weights(plan.u, plan.ranges);
        }
        const auto u = draw_u_from_hypercube(
            plan, config.mode, derive_seed(config.seed, "draw:" + std::to_string(layer_index) + ":" + std::to_string(g)));
        plan.weights = u_to_weights(u, plan.ranges);
        for (Eigen::Index i = 0; i < inputs.cols(); ++i) layer.weight_matrix(i, g) = plan.weights[i];
        layer.plans[g] = std::move(plan);
    }
    return layer;
}

std::vector<LayerInit> init_network(const PainleveSolution& sol, const LabeledDataset& dataset,
                                    std::span<const int> widths, const InitConfig& config) {
    if (widths.empty()) throw std::invalid_argument("init_network: need at least one layer");
    std::vector<LayerInit> out;
    Eigen::MatrixXd inputs = dataset.features;
    for (std::size_t l = 0; l < widths.size(); ++l) {
        out.push_back(init_layer(sol, inputs, dataset.labels, widths[l], config, static_cast<int>(l)));
        if (l + 1 == widths.size()) break;
        inputs = sigmoid(inputs * out.back().weight_matrix);
        const Eigen::RowVectorXd spread = inputs.colwise().maxCoeff() - inputs.colwise().minCoeff();
        if (spread.maxCoeff() < 1e-12)
            out.back().warnings.push_back("layer " + std::to_string(l) +
                                          " produces constant activations for every sample (dead layer)");
    }
    return out;
}

Network network_from(const std::vector<LayerInit>& layers, OutputActivation output) {
    Network net;
    net.output = output;
    for (const auto& l : layers) net.layers.push_back(l.weight_matrix);
    net.validate();
    return net;
}

}  // namespace rmtinit
