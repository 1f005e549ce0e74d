#pragma once

#include <cstdint>
#include <span>

#include "rmtinit/painleve.hpp"

namespace rmtinit {

/// Wigner semicircle (2/pi) sqrt(1 - x^2) on [-1, 1], zero outside.
double semicircle_density(double x);

/// Tracy-Widom beta = 1 CDF. Throws std::out_of_range outside the grid.
double tracy_widom_f1(const PainleveSolution& sol, double x);

/// ln F1'(x) = ln F1(x) + ln((tail(x) + q(x))/2).
double log_f1_prime(const PainleveSolution& sol, double x);

/// Asymptotic P(lambda_max <= s) for the GOE of the given order, through the
/// edge scaling t = (s - sqrt(2(order+1))) sqrt(2) (order+1)^{1/6}. Outside
/// the grid it returns 0 (left) or 1 (right).
double p_lambda_max(const PainleveSolution& sol, int order, double s);

/// Edge-scaled variable sqrt(2) N^{1/6} (lambda - sqrt(2N)).
double edge_scale(int order, double lambda);

/// Kolmogorov-Smirnov distance between a sample of edge-scaled values and F1.
/// Samples beyond the grid contribute F1 = 0 or 1.
double ks_distance_to_f1(const PainleveSolution& sol, std::span<const double> scaled);

}  // namespace rmtinit
