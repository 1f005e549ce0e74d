#include "rmtinit/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "rmtinit/airy.hpp"
#include "rmtinit/gaussian_field.hpp"
#include "rmtinit/goe.hpp"
#include "rmtinit/landscape.hpp"
#include "rmtinit/network.hpp"
#include "rmtinit/parallel.hpp"
#include "rmtinit/tracy_widom.hpp"
#include "rmtinit/zn_oracle.hpp"

namespace rmtinit {

namespace {

std::string printf_str(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, format, a, b);
    return buf;
}

}  // namespace

std::vector<CheckResult> run_oracle_checks(const PainleveSolution& sol, std::uint64_t seed, unsigned jobs) {
    std::vector<CheckResult> out;

    {
        const double d = std::abs(sol.q_at(6.0) - airy_ai(6.0).ai);
        out.push_back({"painleve_right_airy", d <= 1e-6, printf_str("|q(6)-Ai(6)| = %.3g", d)});
        const double r = sol.q_at(-6.0) / std::sqrt(3.0);
        out.push_back({"painleve_left_asymptote", r >= 0.95 && r <= 1.05, printf_str("q(-6)/sqrt(3) = %.6f", r)});
        int bad = 0;
        const auto lf = sol.ln_f1();
        for (std::size_t i = 1; i < lf.size(); ++i) bad += lf[i] < lf[i - 1];
        out.push_back({"ln_f1_monotone", bad == 0, printf_str("%g violations", bad)});
    }
    {
        double worst = 0;
        for (int i = 0; i < 50; ++i) {
            const double t = -6.0 + 8.0 * i / 49.0, h = 1e-4;
            const double fd = (std::log(tracy_widom_f1(sol, t + h)) - std::log(tracy_widom_f1(sol, t - h))) / (2 * h);
            const double an = std::exp(log_f1_prime(sol, t) - std::log(tracy_widom_f1(sol, t)));
            worst = std::max(worst, std::abs(an - fd) / std::abs(fd));
        }
        out.push_back({"log_f1_prime_vs_fd", worst <= 1e-3, printf_str("max relative error %.3g", worst)});
    }
    {
        const auto st = scaled_spectrum_stats(400, 20, derive_seed(seed, "semicircle"), 0.1, jobs);
        const bool ok = std::abs(st.density_at_zero - 2 / std::numbers::pi) <= 0.03 &&
                        std::abs(st.second_moment - 0.25) <= 0.01;
        out.push_back({"semicircle", ok,
                       printf_str("density(0) = %.4f, second moment = %.4f", st.density_at_zero, st.second_moment)});
    }
    {
        const int n = 200;
        auto lm = sample_max_eigenvalues(n, 1000, derive_seed(seed, "tw"), jobs);
        for (double& x : lm) x = edge_scale(n, x);
        const double ks = ks_distance_to_f1(sol, lm);
        out.push_back({"tracy_widom_ks", ks <= 0.06, printf_str("KS = %.4f (N=200, 1000 draws)", ks)});
    }
    {
        double worst = 0;
        for (double s : {0.0, 1.0, 2.0, 3.0}) {
            const auto z = z_n_bruteforce(3, s, 40000, derive_seed(seed, static_cast<std::uint64_t>(s * 10)));
            worst = std::max(worst, std::abs(z.direct - z.vandermonde));
        }
        out.push_back({"z_n_estimators_agree", worst <= 0.03, printf_str("max |direct - vandermonde| = %.4f", worst)});
    }
    {
        const auto f = [](double x) { return std::exp(-x); };
        const FieldSpec spec = make_symmetric_field(2, 41, 6.0, f, 1.0);
        const double lo = count_minima_bruteforce(spec, 0.5, 20, derive_seed(seed, "census-lo"), jobs);
        const double hi = count_minima_bruteforce(spec, 3.0, 20, derive_seed(seed, "census-hi"), jobs);
        out.push_back({"landscape_census_phase", lo > hi && std::abs(hi - 1.0) <= 0.2,
                       printf_str("mean minima %.3f at ratio 0.5, %.3f at ratio 3", lo, hi)});
    }
    {
        std::mt19937_64 rng(derive_seed(seed, "grad"));
        std::normal_distribution<double> g;
        double worst = 0;
        for (int trial = 0; trial < 5; ++trial) {
            Network net;
            net.layers = {Eigen::MatrixXd(3, 4), Eigen::MatrixXd(4, 2)};
            for (auto& w : net.layers)
                for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = g(rng);
            Eigen::MatrixXd x(6, 3), y = Eigen::MatrixXd::Zero(6, 2);
            for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
            for (int i = 0; i < 6; ++i) y(i, i % 2) = 1;
            Eigen::VectorXd grad;
            error_and_gradient(net, x, y, grad);
            const Eigen::VectorXd p = net.flatten();
            for (Eigen::Index k = 0; k < p.size(); ++k) {
                Network a = net, b = net;
                Eigen::VectorXd pa = p, pb = p;
                pa[k] += 1e-5;
                pb[k] -= 1e-5;
                a.assign(pa);
                b.assign(pb);
                const double fd = (mse_error(a, x, y) - mse_error(b, x, y)) / 2e-5;
                worst = std::max(worst, std::abs(fd - grad[k]) / std::max(1e-8, std::abs(grad[k]) + std::abs(fd)));
            }
        }
        out.push_back({"backprop_vs_fd", worst <= 1e-5, printf_str("max relative error %.3g", worst)});
    }
    return out;
}

}  // namespace rmtinit
