#pragma once

namespace rmtinit {

struct AiryValue {
    double ai;
    double ai_prime;
};

/// Airy function Ai and its derivative for x >= -5.
///
/// Maclaurin series on |x| <= 5, the decaying asymptotic expansion for x > 5.
/// Throws std::domain_error for x < -5 (the oscillatory region is not needed
/// by the Painleve boundary condition).
AiryValue airy_ai(double x);

/// Integral of Ai over [x, +inf) for x >= 5, by composite Simpson on the
/// asymptotic form.
double airy_ai_tail_integral(double x);

}  // namespace rmtinit
