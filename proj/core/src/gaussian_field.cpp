#include "rmtinit/gaussian_field.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rmtinit/parallel.hpp"

namespace rmtinit {

std::size_t FieldSpec::point_count() const {
    std::size_t n = axes.empty() ? 0 : 1;
    for (const auto& a : axes) n *= a.size();
    return n;
}

Eigen::VectorXd FieldSpec::point(std::size_t flat) const {
    Eigen::VectorXd p(dimension());
    for (int d = dimension() - 1; d >= 0; --d) {
        const std::size_t len = axes[d].size();
        p[d] = axes[d][flat % len];
        flat /= len;
    }
    return p;
}

FieldSpec make_symmetric_field(int dimension, int points, double half_width, CovarianceFunction f, double f2) {
    if (points < 1) throw std::invalid_argument("make_symmetric_field: need at least one point per axis");
    std::vector<double> axis(points);
    for (int i = 0; i < points; ++i)
        axis[i] = points == 1 ? 0.0 : -half_width + 2.0 * half_width * i / (points - 1);
    return {std::vector<std::vector<double>>(dimension, axis), std::move(f), f2};
}

GaussianFieldSampler::GaussianFieldSampler(FieldSpec spec) : spec_(std::move(spec)) {
    const int dim = spec_.dimension();
    if (dim < 1) throw std::invalid_argument("GaussianFieldSampler: empty grid");
    if (!spec_.f) throw std::invalid_argument("GaussianFieldSampler: missing covariance function");
    const std::size_t n = spec_.point_count();
    if (n == 0) throw std::invalid_argument("GaussianFieldSampler: empty grid");
    if (n > 10000) throw std::invalid_argument("GaussianFieldSampler: grid exceeds 1e4 points");

    std::vector<Eigen::VectorXd> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = spec_.point(i);
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = dim * spec_.f((pts[i] - pts[j]).squaredNorm() / (2.0 * dim));
            cov(i, j) = v;
            cov(j, i) = v;
        }
    cov.diagonal().array() += 1e-10;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("GaussianFieldSampler: covariance not positive definite after regularization");
    lower_ = llt.matrixL();
}

Eigen::VectorXd GaussianFieldSampler::draw(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(lower_.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    return lower_.triangularView<Eigen::Lower>() * z;
}

Eigen::VectorXd sample_gaussian_field(const FieldSpec& spec, std::uint64_t seed) {
    return GaussianFieldSampler(spec).draw(seed);
}

int count_grid_minima(const FieldSpec& spec, const Eigen::VectorXd& field, double mu) {
    const int dim = spec.dimension();
    if (dim != 2 && dim != 3) throw std::invalid_argument("count_grid_minima: dimension must be 2 or 3");
    for (const auto& a : spec.axes)
        if (a.size() < 5) throw std::invalid_argument("count_grid_minima: grid too coarse (< 5 points per axis)");
    if (static_cast<std::size_t>(field.size()) != spec.point_count())
        throw std::invalid_argument("count_grid_minima: field size does not match grid");

    std::vector<std::size_t> len(dim), stride(dim);
    for (int d = dim - 1; d >= 0; --d) {
        len[d] = spec.axes[d].size();
        stride[d] = d == dim - 1 ? 1 : stride[d + 1] * len[d + 1];
    }
    const std::size_t n = spec.point_count();
    Eigen::VectorXd h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = 0.5 * mu * spec.point(i).squaredNorm() + field[i];

    std::vector<int> idx(dim);
    int count = 0;
    for (std::size_t flat = 0; flat < n; ++flat) {
        std::size_t rem = flat;
        bool interior = true;
        for (int d = dim - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(rem % len[d]);
            rem /= len[d];
            if (idx[d] == 0 || idx[d] + 1 == static_cast<int>(len[d])) interior = false;
        }
        if (!interior) continue;
        const double v = h[flat];

        // axis and diagonal neighbours: all offsets in {-1,0,1}^dim except 0
        bool is_min = true;
        const int combos = dim == 2 ? 9 : 27;
        for (int c = 0; c < combos && is_min; ++c) {
            int code = c;
            long off = 0;
            bool centre = true;
            for (int d = 0; d < dim; ++d) {
                const int o = code % 3 - 1;
                code /= 3;
                if (o != 0) centre = false;
                off += o * static_cast<long>(stride[d]);
            }
            if (!centre && !(h[static_cast<long>(flat) + off] > v)) is_min = false;
        }
        if (!is_min) continue;

        Eigen::MatrixXd hess(dim, dim);
        for (int a = 0; a < dim; ++a) {
            const double ha = spec.axes[a][idx[a] + 1] - spec.axes[a][idx[a]];
            const long sa = static_cast<long>(stride[a]);
            const long f0 = static_cast<long>(flat);
            hess(a, a) = (h[f0 + sa] - 2.0 * v + h[f0 - sa]) / (ha * ha);
            for (int b = a + 1; b < dim; ++b) {
                const double hb = spec.axes[b][idx[b] + 1] - spec.axes[b][idx[b]];
                const long sb = static_cast<long>(stride[b]);
                const double m =
                    (h[f0 + sa + sb] - h[f0 + sa - sb] - h[f0 - sa + sb] + h[f0 - sa - sb]) / (4.0 * ha * hb);
                hess(a, b) = m;
                hess(b, a) = m;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() > 0) ++count;
    }
    return count;
}

double count_minima_bruteforce(const FieldSpec& spec, double mu, int draws, std::uint64_t seed, unsigned jobs) {
    if (draws < 1) throw std::invalid_argument("count_minima_bruteforce: draws must be >= 1");
    const int dim = spec.dimension();
    if (dim != 2 && dim != 3) throw std::invalid_argument("count_minima_bruteforce: dimension must be 2 or 3");
    for (const auto& a : spec.axes)
        if (a.size() < 5) throw std::invalid_argument("count_minima_bruteforce: grid too coarse (< 5 points per axis)");
    const GaussianFieldSampler sampler(spec);
    std::vector<int> counts(draws);
    parallel_for(static_cast<std::size_t>(draws), jobs, [&](std::size_t d) {
        counts[d] = count_grid_minima(spec, sampler.draw(derive_seed(seed, d)), mu);
    });
    double total = 0;
    for (int c : counts) total += c;
    return total / draws;
}

}  // namespace rmtinit
