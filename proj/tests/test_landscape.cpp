#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rmtinit/gaussian_field.hpp"
#include "rmtinit/landscape.hpp"
#include "rmtinit/tracy_widom.hpp"
#include "support.hpp"

using namespace rmtinit;

namespace {

// independent re-derivation of the quadratic part
double quadratic_by_hand(int n, double r, double t) {
    const long double n1 = n + 1.0L;
    const long double s = std::sqrt(2.0L * n1) + t * std::pow(n1, -1.0L / 6.0L) / std::sqrt(2.0L);
    const long double d = s * std::sqrt(2.0L / n) - r;
    return static_cast<double>(s * s / 2.0L - 0.5L * n * d * d);
}

}  // namespace

TEST_CASE("h_n minus ln F1' is the closed-form quadratic") {
    const auto& sol = default_table();
    for (int n : {2, 16, 256})
        for (double r : {0.3, 1.0, 3.0})
            for (double t : {-9.5, -3.0, 0.0, 2.5, 7.9}) {
                CAPTURE(n);
                CAPTURE(r);
                CAPTURE(t);
                const double q = h_n(sol, n, r, t) - log_f1_prime(sol, t);
                CHECK(q == doctest::Approx(quadratic_by_hand(n, r, t)).epsilon(1e-10));
                CHECK(h_n_quadratic(n, r, t) == doctest::Approx(quadratic_by_hand(n, r, t)).epsilon(1e-12));
            }
}

TEST_CASE("h_n argument checks") {
    const auto& sol = default_table();
    CHECK_THROWS_AS(h_n(sol, 1, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(h_n(sol, 4, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(h_n(sol, 4, 1.0, 9.0), std::out_of_range);
}

TEST_CASE("h_n at n=256 and ratio 1 peaks inside the grid") {
    const auto& sol = default_table();
    const auto k = h_n_argmax_index(sol, 256, 1.0);
    CHECK(k > 0);
    CHECK(k + 1 < sol.size());
}

TEST_CASE("quadratic part of h_n is concave along the grid") {
    const auto& sol = default_table();
    const auto g = sol.grid();
    for (double r : {0.5, 1.0, 2.0}) {
        for (std::size_t i = 1; i + 1 < g.size(); i += 13) {
            const double d2 = h_n_quadratic(64, r, g[i + 1]) - 2 * h_n_quadratic(64, r, g[i]) +
                              h_n_quadratic(64, r, g[i - 1]);
            REQUIRE(d2 <= 1e-9);
        }
    }
}

TEST_CASE("windowed integral is additive and reproduces the full line") {
    const auto& sol = default_table();
    for (int n : {2, 64, 512}) {
        for (double r : {0.5, 1.0, 3.0}) {
            CAPTURE(n);
            CAPTURE(r);
            const double whole = i_n_windowed(sol, n, r, -7.3, 5.1);
            const double left = i_n_windowed(sol, n, r, -7.3, 0.37);
            const double right = i_n_windowed(sol, n, r, 0.37, 5.1);
            const double joined = std::log(std::exp(left - whole) + std::exp(right - whole)) + whole;
            CHECK(std::abs(std::exp(joined - whole) - 1.0) <= 1e-6);
            CHECK(i_n_windowed(sol, n, r, sol.t_min(), sol.t_max()) == doctest::Approx(i_n_full(sol, n, r)).epsilon(1e-12));
        }
    }
    CHECK_THROWS(i_n_windowed(sol, 4, 1.0, 1.0, 1.0));
    CHECK_THROWS(i_n_windowed(sol, 4, 1.0, 2.0, 1.0));
    CHECK_THROWS(i_n_windowed(sol, 4, 1.0, -11.0, 1.0));
}

TEST_CASE("windowed integral matches a direct fine-grid quadrature") {
    // Simpson on 20001 points over the same window, evaluated via h_n directly
    const auto& sol = default_table();
    const int n = 16;
    const double r = 0.8, a = -4.0, b = 3.0;
    const int m = 20000;
    const double h = (b - a) / m;
    double peak = -INFINITY;
    for (int i = 0; i <= m; ++i) peak = std::max(peak, h_n(sol, n, r, a + i * h));
    double s = 0;
    for (int i = 0; i <= m; ++i) {
        const double w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
        s += w * std::exp(h_n(sol, n, r, a + i * h) - peak);
    }
    const double ref = std::log(s * h / 3) + peak;
    CHECK(std::abs(i_n_windowed(sol, n, r, a, b) - ref) <= 1e-4);
}

TEST_CASE("log prefactor against a direct evaluation at small n") {
    for (int n : {2, 5, 10, 40}) {
        for (double r : {0.5, 2.0}) {
            const double direct = std::pow(1.0 / r, n) * std::pow(2.0, (n + 3) / 2.0) * std::tgamma((n + 3) / 2.0) /
                                  (std::sqrt(std::numbers::pi) * (n + 1) * std::pow(n, n / 2.0));
            CHECK(log_minima_prefactor(n, r) == doctest::Approx(std::log(direct)).epsilon(1e-12));
        }
    }
}

TEST_CASE("mean minima stays finite in log space") {
    const auto& sol = default_table();
    for (int n : {2, 3, 16, 64, 256, 1024, 4096})
        for (double r : {0.1, 0.5, 1.0, 3.0, 10.0}) {
            const auto m = mean_minima(sol, n, r);
            CAPTURE(n);
            CAPTURE(r);
            REQUIRE(std::isfinite(m.log_mean_count));
        }
    CHECK_THROWS(mean_minima(sol, 1, 1.0));
    CHECK_THROWS(mean_minima(sol, 4, -1.0));
}

TEST_CASE("windowed mean minima is additive") {
    const auto& sol = default_table();
    const auto whole = mean_minima(sol, 32, 0.7, Window{-5.0, 4.0});
    const auto a = mean_minima(sol, 32, 0.7, Window{-5.0, -1.0});
    const auto b = mean_minima(sol, 32, 0.7, Window{-1.0, 4.0});
    CHECK((a.mean_count() + b.mean_count()) / whole.mean_count() == doctest::Approx(1.0).epsilon(1e-6));
    REQUIRE(whole.window.has_value());
    CHECK(whole.window->a == -5.0);
}

TEST_CASE("estimate_mu_c floor, order invariance and errors") {
    Eigen::MatrixXd same(5, 4);
    same.rowwise() = Eigen::RowVector4d(1, 2, 3, 4);
    for (double v : estimate_mu_c(same)) CHECK(v == doctest::Approx(1e-4).epsilon(1e-12));

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Eigen::MatrixXd x(20, 6);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
    Eigen::MatrixXd rev = x.colwise().reverse();
    const auto m1 = estimate_mu_c(x), m2 = estimate_mu_c(rev);
    for (std::size_t i = 0; i < m1.size(); ++i) CHECK(m1[i] == doctest::Approx(m2[i]).epsilon(1e-12));

    CHECK_THROWS_AS(estimate_mu_c(x.topRows(2)), std::invalid_argument);
}

TEST_CASE("numpy-style gradient") {
    Eigen::MatrixXd m(3, 3);
    m << 1, 2, 4, 3, 5, 9, 6, 10, 20;
    // numpy.gradient(m, axis=0) and axis=1
    Eigen::MatrixXd g0(3, 3), g1(3, 3);
    g0 << 2, 3, 5, 2.5, 4, 8, 3, 5, 11;
    g1 << 1, 1.5, 2, 2, 3, 4, 4, 7, 10;
    CHECK((gradient_along(m, 0) - g0).norm() < 1e-14);
    CHECK((gradient_along(m, 1) - g1).norm() < 1e-14);
}

TEST_CASE("estimate_mu_c recovers the analytic width of a smooth field") {
    // samples with C[i,j] = exp(-(i-j)^2 / 2N): second difference of the
    // covariance at the diagonal is -1/N, so mu_c = sqrt(1/N)
    const int n = 32, samples = 20000;
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = std::exp(-double((i - j) * (i - j)) / (2.0 * n));
    c.diagonal().array() += 1e-10;
    const Eigen::MatrixXd l = c.llt().matrixL();
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    Eigen::MatrixXd z(samples, n);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = g(rng);
    const Eigen::MatrixXd x = z * l.transpose();
    const auto mu = estimate_mu_c(x);
    const double expected = std::sqrt(1.0 / n);
    for (int i = 2; i < n - 2; ++i) {
        CAPTURE(i);
        CHECK(std::abs(mu[i] - expected) / expected <= 0.25);
    }
}

TEST_CASE("landscape parameter construction") {
    const auto a = LandscapeSpec::analytic(3, 0.5, 4.0);
    REQUIRE(a.mu_c.size() == 3u);
    for (double v : a.mu_c) CHECK(v == doctest::Approx(2.0));
    CHECK(a.ratio(1) == doctest::Approx(0.25));
    const auto e = LandscapeSpec::empirical(1.0, {0.0, 2.0});
    CHECK(e.mu_c[0] >= kMuCFloor);
}

TEST_CASE("gaussian field determinism, single point and covariance") {
    const auto f = [](double x) { return std::exp(-x); };
    FieldSpec one;
    one.axes = {{0.0}, {0.0}};
    one.f = f;
    double sum2 = 0;
    for (int s = 0; s < 4000; ++s) {
        const auto v = sample_gaussian_field(one, static_cast<std::uint64_t>(s));
        REQUIRE(v.size() == 1);
        sum2 += v[0] * v[0];
    }
    CHECK(sum2 / 4000 == doctest::Approx(2.0).epsilon(0.08));  // N f(0) with N = 2

    const auto spec = make_symmetric_field(2, 9, 3.0, f, 1.0);
    const GaussianFieldSampler sampler(spec);
    CHECK(sampler.draw(5) == sampler.draw(5));

    const std::pair<std::size_t, std::size_t> pairs[] = {{0, 0}, {40, 41}, {40, 49}, {10, 30}, {0, 80}};
    std::vector<double> acc(5, 0.0);
    const int draws = 2000;
    for (int d = 0; d < draws; ++d) {
        const auto v = sampler.draw(static_cast<std::uint64_t>(1000 + d));
        for (int p = 0; p < 5; ++p) acc[p] += v[pairs[p].first] * v[pairs[p].second];
    }
    for (int p = 0; p < 5; ++p) {
        const double dist2 = (spec.point(pairs[p].first) - spec.point(pairs[p].second)).squaredNorm();
        const double expected = 2.0 * f(dist2 / 4.0);
        CAPTURE(p);
        CHECK(std::abs(acc[p] / draws - expected) <= 0.1 * 2.0);
    }
}

TEST_CASE("gaussian field size guard") {
    const auto f = [](double x) { return std::exp(-x); };
    CHECK_THROWS(GaussianFieldSampler(make_symmetric_field(3, 30, 3.0, f, 1.0)));
}

TEST_CASE("census of a pure bowl is one minimum") {
    const auto spec = make_symmetric_field(2, 11, 5.0, [](double) { return 0.0; }, 1.0);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.point_count()));
    CHECK(count_grid_minima(spec, zero, 1.0) == 1);
    const auto spec3 = make_symmetric_field(3, 7, 3.0, [](double) { return 0.0; }, 1.0);
    const Eigen::VectorXd zero3 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec3.point_count()));
    CHECK(count_grid_minima(spec3, zero3, 0.5) == 1);
    CHECK_THROWS(count_minima_bruteforce(make_symmetric_field(2, 4, 1.0, [](double) { return 0.0; }, 1.0), 1.0, 1, 1));
}

TEST_CASE("census phase behaviour at n=2") {
    const auto f = [](double x) { return std::exp(-x); };
    const auto spec = make_symmetric_field(2, 41, 6.0, f, 1.0);
    const double low = count_minima_bruteforce(spec, 0.5, 50, 21);
    const double high = count_minima_bruteforce(spec, 3.0, 50, 22);
    CHECK(low > high);
    CHECK(std::abs(high - 1.0) <= 0.2);
}

TEST_CASE("minima csv export") {
    const auto& sol = default_table();
    const int ns[] = {2, 16};
    const double rs[] = {0.5, 1.0, 3.0};
    const auto rows = minima_sweep(sol, ns, rs);
    CHECK(rows.size() == 6u);
    std::ostringstream out;
    write_minima_csv(rows, out);
    const std::string text = out.str();
    CHECK(text.rfind("n,ratio,a,b,log_mean_count\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);
    CHECK(text.find("-inf,inf") != std::string::npos);
}
