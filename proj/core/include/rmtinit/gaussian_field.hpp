#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace rmtinit {

/// Isotropic covariance profile f of <V(m)V(n)> = N f(|m-n|^2 / 2N).
using CovarianceFunction = std::function<double(double)>;

/// Gaussian field on a tensor grid in 2 or 3 dimensions. Points are stored
/// row-major: the last axis varies fastest.
struct FieldSpec {
    std::vector<std::vector<double>> axes;
    CovarianceFunction f;
    double f_second_derivative_at_zero = 1.0;  // mu_c^2 for the census ratio

    int dimension() const { return static_cast<int>(axes.size()); }
    std::size_t point_count() const;
    Eigen::VectorXd point(std::size_t flat_index) const;
};

/// Symmetric grid of `points` abscissae on [-half_width, half_width] per axis.
FieldSpec make_symmetric_field(int dimension, int points, double half_width, CovarianceFunction f,
                               double f_second_derivative_at_zero);

/// Cholesky factor of the grid covariance (+1e-10 on the diagonal), reused
/// across draws. Rejects grids with more than 1e4 points and covariances that
/// are not positive definite after regularization.
class GaussianFieldSampler {
public:
    explicit GaussianFieldSampler(FieldSpec spec);

    Eigen::VectorXd draw(std::uint64_t seed) const;
    const FieldSpec& spec() const noexcept { return spec_; }

private:
    FieldSpec spec_;
    Eigen::MatrixXd lower_;
};

Eigen::VectorXd sample_gaussian_field(const FieldSpec& spec, std::uint64_t seed);

/// Strict local minima of H = (mu/2)|x|^2 + field over interior grid points:
/// lower than all axis and diagonal neighbours and with a positive definite
/// finite-difference Hessian.
int count_grid_minima(const FieldSpec& spec, const Eigen::VectorXd& field, double mu);

/// Mean minima count over `draws` independent fields. Rejects fewer than 5
/// points per axis and dimensions other than 2 or 3.
double count_minima_bruteforce(const FieldSpec& spec, double mu, int draws, std::uint64_t seed,
                               unsigned jobs = 1);

}  // namespace rmtinit
