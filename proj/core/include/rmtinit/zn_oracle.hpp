#pragma once

#include <cstdint>

namespace rmtinit {

/// Two Monte Carlo estimates of P_N(lambda_max <= s) for the GOE.
struct ZnEstimate {
    double direct = 0.0;         // fraction of sampled GOE matrices with lambda_max <= s
    double direct_se = 0.0;
    double vandermonde = 0.0;    // Z_N(s)/Z_N(inf), Vandermonde-weighted Gaussian draws
    double vandermonde_se = 0.0;
    double combined = 0.0;       // inverse-variance weighted reconciliation
    bool agree = true;           // |direct - vandermonde| <= 3 combined standard errors
};

/// Brute-force oracle. Requires order in [1, 6] and samples >= 1000,
/// otherwise std::invalid_argument.
ZnEstimate z_n_bruteforce(int order, double s, int samples, std::uint64_t seed);

}  // namespace rmtinit
