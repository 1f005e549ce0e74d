#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace rmtinit {

/// Real symmetric matrix (M + M^T)/2 with M standard normal: diagonal
/// variance 1, off-diagonal variance 1/2, spectral edge near sqrt(2N).
struct GoeSample {
    int order = 0;
    Eigen::MatrixXd entries;
    std::uint64_t seed = 0;
};

GoeSample sample_goe(int order, std::uint64_t seed);

/// Ascending eigenvalues.
Eigen::VectorXd goe_eigenvalues(const GoeSample& sample);

double goe_max_eigenvalue(const GoeSample& sample);

struct SpectrumStats {
    double density_at_zero = 0.0;  // histogram estimate on a centered bin
    double second_moment = 0.0;
    std::size_t eigenvalue_count = 0;
};

/// Pools eigenvalues of `draws` GOE matrices scaled by 1/sqrt(2N) and
/// reports the semicircle diagnostics.
SpectrumStats scaled_spectrum_stats(int order, int draws, std::uint64_t seed,
                                    double bin_width = 0.1, unsigned jobs = 1);

/// Maximal eigenvalues of `draws` independent GOE matrices, in draw order.
std::vector<double> sample_max_eigenvalues(int order, int draws, std::uint64_t seed,
                                           unsigned jobs = 1);

}  // namespace rmtinit
