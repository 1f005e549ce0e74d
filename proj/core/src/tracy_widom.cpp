#include "rmtinit/tracy_widom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rmtinit {

double semicircle_density(double x) {
    const double ax = std::abs(x);
    if (ax > 1.0) return 0.0;
    return 2.0 / std::numbers::pi * std::sqrt((1.0 - ax) * (1.0 + ax));
}

double tracy_widom_f1(const PainleveSolution& sol, double x) {
    return std::clamp(std::exp(sol.ln_f1_at(x)), 0.0, 1.0);
}

double log_f1_prime(const PainleveSolution& sol, double x) {
    return sol.ln_f1_at(x) + std::log(sol.d_ln_f1_at(x));
}

double p_lambda_max(const PainleveSolution& sol, int order, double s) {
    if (order < 2) throw std::invalid_argument("p_lambda_max: order must be >= 2");
    const double n1 = order + 1.0;
    const double t = (s - std::sqrt(2.0 * n1)) * std::numbers::sqrt2 * std::pow(n1, 1.0 / 6.0);
    if (t < sol.t_min()) return 0.0;
    if (t > sol.t_max()) return 1.0;
    return tracy_widom_f1(sol, t);
}

double edge_scale(int order, double lambda) {
    return std::numbers::sqrt2 * std::pow(static_cast<double>(order), 1.0 / 6.0) *
           (lambda - std::sqrt(2.0 * order));
}

double ks_distance_to_f1(const PainleveSolution& sol, std::span<const double> scaled) {
    if (scaled.empty()) throw std::invalid_argument("ks_distance_to_f1: empty sample");
    std::vector<double> x(scaled.begin(), scaled.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double f;
        if (x[i] < sol.t_min()) f = 0.0;
        else if (x[i] > sol.t_max()) f = 1.0;
        else f = tracy_widom_f1(sol, x[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

}  // namespace rmtinit
