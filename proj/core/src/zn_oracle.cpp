#include "rmtinit/zn_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rmtinit/goe.hpp"
#include "rmtinit/parallel.hpp"

namespace rmtinit {

ZnEstimate z_n_bruteforce(int order, double s, int samples, std::uint64_t seed) {
    if (order < 1 || order > 6) throw std::invalid_argument("z_n_bruteforce: order must be in [1, 6]");
    if (samples < 1000) throw std::invalid_argument("z_n_bruteforce: need at least 1000 samples");

    ZnEstimate est;
    const double n = samples;

    // (a) direct eigen-sampling of the ensemble
    const std::uint64_t direct_seed = derive_seed(seed, "direct");
    int below = 0;
    for (int i = 0; i < samples; ++i)
        if (goe_max_eigenvalue(sample_goe(order, derive_seed(direct_seed, i))) <= s) ++below;
    est.direct = below / n;
    est.direct_se = std::sqrt(est.direct * (1.0 - est.direct) / n);

    // (b) Z_N(s)/Z_N(inf): iid standard normal eigenvalue proposals weighted
    // by |prod_{i<j} (l_i - l_j)|; importance ratio estimator.
    std::mt19937_64 rng(derive_seed(seed, "vandermonde"));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> lambda(order);
    std::vector<double> w(samples);
    std::vector<char> inside(samples);
    double sum_w = 0, sum_wi = 0;
    for (int k = 0; k < samples; ++k) {
        for (double& l : lambda) l = normal(rng);
        double prod = 1.0;
        for (int i = 0; i < order; ++i)
            for (int j = i + 1; j < order; ++j) prod *= std::abs(lambda[i] - lambda[j]);
        w[k] = prod;
        inside[k] = *std::max_element(lambda.begin(), lambda.end()) <= s;
        sum_w += prod;
        if (inside[k]) sum_wi += prod;
    }
    est.vandermonde = sum_w > 0 ? sum_wi / sum_w : 0.0;
    const double mean_w = sum_w / n;
    double var = 0;
    for (int k = 0; k < samples; ++k) {
        const double r = w[k] * ((inside[k] ? 1.0 : 0.0) - est.vandermonde);
        var += r * r;
    }
    est.vandermonde_se = mean_w > 0 ? std::sqrt(var / (n * (n - 1.0))) / mean_w : 0.0;

    const double se = std::hypot(est.direct_se, est.vandermonde_se);
    const double diff = std::abs(est.direct - est.vandermonde);
    est.agree = diff <= 3.0 * se || diff == 0.0;

    const double vd = est.direct_se * est.direct_se, vv = est.vandermonde_se * est.vandermonde_se;
    if (vd + vv == 0.0) est.combined = 0.5 * (est.direct + est.vandermonde);
    else if (vd == 0.0) est.combined = est.direct;
    else if (vv == 0.0) est.combined = est.vandermonde;
    else est.combined = (est.direct / vd + est.vandermonde / vv) / (1.0 / vd + 1.0 / vv);
    return est;
}

}  // namespace rmtinit
