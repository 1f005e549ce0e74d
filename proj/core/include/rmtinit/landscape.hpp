#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rmtinit/painleve.hpp"

namespace rmtinit {

/// Floor applied to |G_ii| before the square root in estimate_mu_c.
inline constexpr double kMuCFloor = 1e-8;

enum class CovarianceKind { analytic, empirical };

/// Parameters of H = (mu/2) sum x_i^2 + V(x) with per-dimension critical values.
struct LandscapeSpec {
    int dimension = 0;
    double mu = 1.0;
    std::vector<double> mu_c;
    CovarianceKind covariance_kind = CovarianceKind::empirical;

    /// Analytic isotropic covariance: every mu_c equals sqrt(f''(0)).
    static LandscapeSpec analytic(int dimension, double mu, double f_second_derivative_at_zero);
    static LandscapeSpec empirical(double mu, std::vector<double> mu_c);

    double ratio(std::size_t i) const { return mu / mu_c.at(i); }
};

struct Window {
    double a;
    double b;
};

struct MinimaCount {
    double log_mean_count = 0.0;     // ln <N_m>
    std::optional<Window> window;    // nullopt: full line (the whole Painleve grid)

    double mean_count() const;
};

/// s_t = sqrt(2(n+1)) + t (n+1)^{-1/6} / sqrt(2).
double edge_abscissa(int n, double t);

/// Quadratic part of h_N: s_t^2/2 - (n/2)(s_t sqrt(2/n) - ratio)^2.
double h_n_quadratic(int n, double ratio, double t);

/// h_N(t) = quadratic part + ln F1'(t). Throws std::out_of_range off-grid and
/// std::invalid_argument for n < 2 or ratio <= 0.
double h_n(const PainleveSolution& sol, int n, double ratio, double t);

/// h_N at every grid node.
std::vector<double> h_n_on_grid(const PainleveSolution& sol, int n, double ratio);

/// Grid index of the maximum of h_N (first index on ties).
std::size_t h_n_argmax_index(const PainleveSolution& sol, int n, double ratio);

/// ln int_a^b exp(h_N(t)) dt, trapezoid over the grid nodes inside (a, b)
/// plus the interpolated endpoints, accumulated in log-sum-exp form.
double i_n_windowed(const PainleveSolution& sol, int n, double ratio, double a, double b);

/// Full-grid I_N.
double i_n_full(const PainleveSolution& sol, int n, double ratio);

/// ln of the prefactor (mu_c/mu)^N 2^{(N+3)/2} Gamma((N+3)/2) / (sqrt(pi)(N+1) N^{N/2}).
double log_minima_prefactor(int n, double ratio);

/// Mean number of minima, optionally restricted to a window of t.
MinimaCount mean_minima(const PainleveSolution& sol, int n, double ratio,
                        std::optional<Window> window = std::nullopt);

/// Per-dimension critical values from one class's (standardized) samples:
/// sqrt(max(|G_ii|, floor)) where G is the covariance differentiated by
/// central differences along rows, then along columns (one-sided at the
/// borders). Needs >= 3 samples, otherwise std::invalid_argument.
std::vector<double> estimate_mu_c(const Eigen::MatrixXd& samples);

/// Population covariance of the rows of `samples`.
Eigen::MatrixXd population_covariance(const Eigen::MatrixXd& samples);

/// Numerical gradient along one axis (0: rows, 1: columns), numpy.gradient rules.
Eigen::MatrixXd gradient_along(const Eigen::MatrixXd& m, int axis);

struct PhaseRow {
    int n;
    double ratio;
    std::optional<Window> window;
    double log_mean_count;
};

std::vector<PhaseRow> minima_sweep(const PainleveSolution& sol, std::span<const int> n_values,
                                   std::span<const double> ratios, std::optional<Window> window = std::nullopt);

/// Columns n,ratio,a,b,log_mean_count; full-line rows carry a=-inf, b=inf.
void write_minima_csv(std::span<const PhaseRow> rows, std::ostream& out);

}  // namespace rmtinit
