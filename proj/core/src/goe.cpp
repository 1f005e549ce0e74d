#include "rmtinit/goe.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rmtinit/parallel.hpp"

namespace rmtinit {

GoeSample sample_goe(int order, std::uint64_t seed) {
    if (order < 1) throw std::invalid_argument("sample_goe: order must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(order, order);
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) m(i, j) = normal(rng);
    GoeSample out{order, Eigen::MatrixXd(order, order), seed};
    for (int i = 0; i < order; ++i) {
        out.entries(i, i) = m(i, i);
        for (int j = i + 1; j < order; ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            out.entries(i, j) = v;
            out.entries(j, i) = v;
        }
    }
    return out;
}

Eigen::VectorXd goe_eigenvalues(const GoeSample& sample) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sample.entries, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("goe_eigenvalues: eigen solver failed");
    return solver.eigenvalues();
}

double goe_max_eigenvalue(const GoeSample& sample) {
    return goe_eigenvalues(sample).maxCoeff();
}

SpectrumStats scaled_spectrum_stats(int order, int draws, std::uint64_t seed, double bin_width, unsigned jobs) {
    if (draws < 1) throw std::invalid_argument("scaled_spectrum_stats: draws must be >= 1");
    if (!(bin_width > 0)) throw std::invalid_argument("scaled_spectrum_stats: bin width must be positive");
    const double scale = 1.0 / std::sqrt(2.0 * order);
    std::vector<double> in_bin(draws), moment(draws);
    parallel_for(static_cast<std::size_t>(draws), jobs, [&](std::size_t d) {
        const Eigen::VectorXd ev = goe_eigenvalues(sample_goe(order, derive_seed(seed, d))) * scale;
        in_bin[d] = static_cast<double>((ev.array().abs() <= 0.5 * bin_width).count());
        moment[d] = ev.squaredNorm();
    });
    SpectrumStats s;
    s.eigenvalue_count = static_cast<std::size_t>(order) * draws;
    double bin = 0, m2 = 0;
    for (int d = 0; d < draws; ++d) {
        bin += in_bin[d];
        m2 += moment[d];
    }
    s.density_at_zero = bin / (static_cast<double>(s.eigenvalue_count) * bin_width);
    s.second_moment = m2 / static_cast<double>(s.eigenvalue_count);
    return s;
}

std::vector<double> sample_max_eigenvalues(int order, int draws, std::uint64_t seed, unsigned jobs) {
    if (draws < 0) throw std::invalid_argument("sample_max_eigenvalues: negative draw count");
    std::vector<double> out(draws);
    parallel_for(static_cast<std::size_t>(draws), jobs,
                 [&](std::size_t d) { out[d] = goe_max_eigenvalue(sample_goe(order, derive_seed(seed, d))); });
    return out;
}

}  // namespace rmtinit
