#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rmtinit/dataset.hpp"
#include "rmtinit/network.hpp"
#include "rmtinit/painleve.hpp"

namespace rmtinit {

enum class DrawMode { deterministic, stochastic };
enum class RatioPolicy { per_dimension, scalar };

std::vector<double> default_ratio_grid();

struct InitConfig {
    DrawMode mode = DrawMode::deterministic;
    RatioPolicy ratio_policy = RatioPolicy::per_dimension;
    std::vector<double> ratio_grid = default_ratio_grid();
    std::optional<double> fixed_ratio;  // bypasses select_mu_ratio when set
    std::uint64_t seed = 0;
    int kmeans_max_iterations = 300;
};

/// Argmax grid index of h_N as a function of mu/mu_c.
struct SaturationCurve {
    std::vector<double> ratios;
    std::vector<std::size_t> argmax_index;
    /// First position from which the index no longer changes; nullopt when
    /// the curve is still moving at the last ratio.
    std::optional<std::size_t> saturation_position;
};

SaturationCurve saturation_curve(const PainleveSolution& sol, int n, std::span<const double> ratio_grid);

struct RatioSelection {
    double ratio = 0.8;
    std::optional<double> r_sat;
    double mu = 0.0;  // ratio * median(mu_c)
    bool fallback = false;
    SaturationCurve curve;
};

/// Picks mu/mu_c in the middle of the pre-saturation ("linear") part of the
/// curve; 0.8 when the curve is flat from the first ratio. Rejects grids that
/// do not span [0.1, 3] with at least 30 points.
RatioSelection select_mu_ratio(const PainleveSolution& sol, int n, std::span<const double> mu_c,
                               std::span<const double> ratio_grid);

/// Per-group result: transform-field vector u (one value per input
/// dimension), its hypercube, and the derived weights.
struct InitPlan {
    int group_id = 0;
    std::vector<double> u;
    std::vector<std::pair<double, double>> hypercube;
    std::vector<double> weights;
    std::vector<double> argmax_t;
    std::vector<double> mu_c;
    std::vector<double> ratios;
    std::vector<double> ranges;  // max_i - min_i over the group's samples

    double hypercube_volume() const;
};

/// Per-dimension argmax of h_N mapped affinely from [t_min, t_max] onto the
/// group's observed range [min_i, max_i]; half-width = one grid cell under
/// the same map. Degenerate dimensions give u_i = min_i, delta_i = 0.
/// Fills weights from u. Needs >= 3 samples.
InitPlan compute_class_u(const PainleveSolution& sol, const Eigen::MatrixXd& class_samples, const InitConfig& config,
                         int group_id = 0);

/// Deterministic: the hypercube center u. Stochastic: uniform in the box.
std::vector<double> draw_u_from_hypercube(const InitPlan& plan, DrawMode mode, std::uint64_t seed);

/// w_i = u_i / range_i, 0 where range_i == 0.
std::vector<double> u_to_weights(std::span<const double> u, std::span<const double> ranges);

struct LayerInit {
    int layer_index = 0;
    Eigen::MatrixXd weight_matrix;  // fan_in x fan_out, no bias row
    std::vector<int> grouping;      // group of every input sample
    bool grouped_by_label = true;
    int fan_out = 0;
    std::vector<InitPlan> plans;
    std::vector<std::string> warnings;
};

/// One layer: groups by label when fan_out equals the number of distinct
/// labels, otherwise by k-means with k = fan_out; one column per group.
LayerInit init_layer(const PainleveSolution& sol, const Eigen::MatrixXd& inputs, std::span<const int> labels,
                     int fan_out, const InitConfig& config, int layer_index = 0);

/// Layer-sequential initialization: each layer is fitted on the sigmoid
/// activations produced by the previously initialized layers.
std::vector<LayerInit> init_network(const PainleveSolution& sol, const LabeledDataset& dataset,
                                    std::span<const int> layer_widths, const InitConfig& config);

Network network_from(const std::vector<LayerInit>& layers, OutputActivation output = OutputActivation::sigmoid);

std::string_view to_string(DrawMode m);
std::string_view to_string(RatioPolicy p);
DrawMode parse_draw_mode(std::string_view s);
RatioPolicy parse_ratio_policy(std::string_view s);

}  // namespace rmtinit
