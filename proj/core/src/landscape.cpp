#include "rmtinit/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "rmtinit/tracy_widom.hpp"

namespace rmtinit {

namespace {

void check_args(int n, double ratio) {
    if (n < 2) throw std::invalid_argument("landscape: dimension n must be >= 2");
    if (!(ratio > 0) || !std::isfinite(ratio)) throw std::invalid_argument("landscape: ratio must be positive");
}

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

LandscapeSpec LandscapeSpec::analytic(int dimension, double mu, double f2) {
    if (dimension < 1) throw std::invalid_argument("LandscapeSpec: dimension must be positive");
    if (!(f2 > 0)) throw std::invalid_argument("LandscapeSpec: f''(0) must be positive");
    return {dimension, mu, std::vector<double>(dimension, std::sqrt(f2)), CovarianceKind::analytic};
}

LandscapeSpec LandscapeSpec::empirical(double mu, std::vector<double> mu_c) {
    for (double& m : mu_c) m = std::max(m, std::sqrt(kMuCFloor));
    const int dim = static_cast<int>(mu_c.size());
    return {dim, mu, std::move(mu_c), CovarianceKind::empirical};
}

double MinimaCount::mean_count() const { return std::exp(log_mean_count); }

double edge_abscissa(int n, double t) {
    const double n1 = n + 1.0;
    return std::sqrt(2.0 * n1) + t * std::pow(n1, -1.0 / 6.0) / std::numbers::sqrt2;
}

double h_n_quadratic(int n, double ratio, double t) {
    const double s = edge_abscissa(n, t);
    const double d = s * std::sqrt(2.0 / n) - ratio;
    return 0.5 * s * s - 0.5 * n * d * d;
}

double h_n(const PainleveSolution& sol, int n, double ratio, double t) {
    check_args(n, ratio);
    return h_n_quadratic(n, ratio, t) + log_f1_prime(sol, t);
}

std::vector<double> h_n_on_grid(const PainleveSolution& sol, int n, double ratio) {
    check_args(n, ratio);
    const auto grid = sol.grid();
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // Node values of ln F1' come straight from the table.
        const double lfp = sol.ln_f1()[i] + std::log(0.5 * (sol.q2_tail()[i] + sol.q()[i]));
        out[i] = h_n_quadratic(n, ratio, grid[i]) + lfp;
    }
    return out;
}

std::size_t h_n_argmax_index(const PainleveSolution& sol, int n, double ratio) {
    const auto h = h_n_on_grid(sol, n, ratio);
    return static_cast<std::size_t>(std::max_element(h.begin(), h.end()) - h.begin());
}

double i_n_windowed(const PainleveSolution& sol, int n, double ratio, double a, double b) {
    check_args(n, ratio);
    if (!(a < b)) throw std::invalid_argument("i_n_windowed: empty window (need a < b)");
    if (!sol.contains(a) || !sol.contains(b)) throw std::out_of_range("i_n_windowed: window outside Painleve grid");

    const auto grid = sol.grid();
    const auto hg = h_n_on_grid(sol, n, ratio);
    std::vector<double> ts{a}, hs{h_n(sol, n, ratio, a)};
    const auto first = std::upper_bound(grid.begin(), grid.end(), a);
    for (auto it = first; it != grid.end() && *it < b; ++it) {
        ts.push_back(*it);
        hs.push_back(hg[static_cast<std::size_t>(it - grid.begin())]);
    }
    ts.push_back(b);
    hs.push_back(h_n(sol, n, ratio, b));

    double acc = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double dt = ts[k + 1] - ts[k];
        if (dt <= 0) continue;
        acc = log_add(acc, std::log(0.5 * dt) + log_add(hs[k], hs[k + 1]));
    }
    return acc;
}

double i_n_full(const PainleveSolution& sol, int n, double ratio) {
    return i_n_windowed(sol, n, ratio, sol.t_min(), sol.t_max());
}

double log_minima_prefactor(int n, double ratio) {
    check_args(n, ratio);
    const double nd = n;
    return nd * std::log(1.0 / ratio) + 0.5 * (nd + 3.0) * std::numbers::ln2 + std::lgamma(0.5 * (nd + 3.0)) -
           0.5 * std::log(std::numbers::pi) - std::log(nd + 1.0) - 0.5 * nd * std::log(nd);
}

MinimaCount mean_minima(const PainleveSolution& sol, int n, double ratio, std::optional<Window> window) {
    const double log_i = window ? i_n_windowed(sol, n, ratio, window->a, window->b) : i_n_full(sol, n, ratio);
    return {log_minima_prefactor(n, ratio) + log_i, window};
}

Eigen::MatrixXd population_covariance(const Eigen::MatrixXd& samples) {
    const Eigen::RowVectorXd mean = samples.colwise().mean();
    const Eigen::MatrixXd centered = samples.rowwise() - mean;
    return centered.transpose() * centered / static_cast<double>(samples.rows());
}

Eigen::MatrixXd gradient_along(const Eigen::MatrixXd& m, int axis) {
    const Eigen::Index len = axis == 0 ? m.rows() : m.cols();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    if (len < 2) return g;
    auto at = [&](Eigen::Index line, Eigen::Index k) { return axis == 0 ? m(k, line) : m(line, k); };
    auto set = [&](Eigen::Index line, Eigen::Index k, double v) { (axis == 0 ? g(k, line) : g(line, k)) = v; };
    const Eigen::Index lines = axis == 0 ? m.cols() : m.rows();
    for (Eigen::Index line = 0; line < lines; ++line) {
        set(line, 0, at(line, 1) - at(line, 0));
        set(line, len - 1, at(line, len - 1) - at(line, len - 2));
        for (Eigen::Index k = 1; k + 1 < len; ++k) set(line, k, 0.5 * (at(line, k + 1) - at(line, k - 1)));
    }
    return g;
}

std::vector<double> estimate_mu_c(const Eigen::MatrixXd& samples) {
    if (samples.rows() < 3)
        throw std::invalid_argument("estimate_mu_c: degenerate covariance (need at least 3 samples)");
    const Eigen::MatrixXd g = gradient_along(gradient_along(population_covariance(samples), 0), 1);
    std::vector<double> mu_c(static_cast<std::size_t>(samples.cols()));
    for (Eigen::Index i = 0; i < samples.cols(); ++i) mu_c[i] = std::sqrt(std::max(std::abs(g(i, i)), kMuCFloor));
    return mu_c;
}

std::vector<PhaseRow> minima_sweep(const PainleveSolution& sol, std::span<const int> n_values,
                                   std::span<const double> ratios, std::optional<Window> window) {
    std::vector<PhaseRow> rows;
    rows.reserve(n_values.size() * ratios.size());
    for (int n : n_values)
        for (double r : ratios) rows.push_back({n, r, window, mean_minima(sol, n, r, window).log_mean_count});
    return rows;
}

void write_minima_csv(std::span<const PhaseRow> rows, std::ostream& out) {
    out << "n,ratio,a,b,log_mean_count\n";
    char buf[200];
    for (const auto& r : rows) {
        if (r.window)
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", r.n, r.ratio, r.window->a, r.window->b,
                          r.log_mean_count);
        else
            std::snprintf(buf, sizeof buf, "%d,%.17g,-inf,inf,%.17g\n", r.n, r.ratio, r.log_mean_count);
        out << buf;
    }
}

}  // namespace rmtinit
