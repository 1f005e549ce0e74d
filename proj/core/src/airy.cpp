#include "rmtinit/airy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rmtinit {

namespace {

constexpr double kAi0 = 0.355028053887817239260;       // Ai(0)
constexpr double kMinusAiPrime0 = 0.258819403792806798405;  // -Ai'(0)

AiryValue maclaurin(double x) {
    const double x3 = x * x * x;
    // f = sum a_k x^{3k}, g = sum c_k x^{3k+1}; derivatives summed alongside.
    double f_term = 1.0, f = 1.0;
    double g_term = x, g = x;
    double fp_term = x * x / 2.0, fp = fp_term;
    double gp_term = 1.0, gp = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double k3 = 3.0 * k;
        f_term *= x3 / ((k3 - 1.0) * k3);
        g_term *= x3 / (k3 * (k3 + 1.0));
        gp_term *= x3 / ((k3 - 2.0) * k3);
        if (k > 1) fp_term *= x3 / ((k3 - 3.0) * (k3 - 1.0));
        f += f_term;
        g += g_term;
        gp += gp_term;
        if (k > 1) fp += fp_term;
        const double scale = std::abs(f) + std::abs(g) + std::abs(fp) + std::abs(gp);
        if (std::abs(f_term) + std::abs(g_term) + std::abs(fp_term) + std::abs(gp_term) < 1e-18 * scale)
            break;
    }
    return {kAi0 * f - kMinusAiPrime0 * g, kAi0 * fp - kMinusAiPrime0 * gp};
}

AiryValue asymptotic(double x) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const double pref = std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi));
    const double x14 = std::sqrt(std::sqrt(x));
    double u = 1.0, sum_u = 1.0, sum_v = 1.0;
    double zeta_pow = 1.0, last = 1.0;
    for (int k = 1; k < 40; ++k) {
        u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
        const double v = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
        zeta_pow *= -zeta;
        const double term_u = u / zeta_pow;
        if (std::abs(term_u) > last) break;  // asymptotic series starts diverging
        last = std::abs(term_u);
        sum_u += term_u;
        sum_v += v / zeta_pow;
        if (last < 1e-18) break;
    }
    return {pref / x14 * sum_u, -pref * x14 * sum_v};
}

}  // namespace

AiryValue airy_ai(double x) {
    if (std::isnan(x)) throw std::domain_error("airy_ai: NaN argument");
    if (x < -5.0) throw std::domain_error("airy_ai: argument below -5 is not supported");
    return x <= 5.0 ? maclaurin(x) : asymptotic(x);
}

double airy_ai_tail_integral(double x) {
    if (x < 5.0) throw std::domain_error("airy_ai_tail_integral: needs x >= 5");
    // Ai decays like exp(-2/3 y^{3/2}); 30 units is far beyond double range.
    const int intervals = 6000;
    const double length = 30.0;
    const double h = length / intervals;
    double sum = airy_ai(x).ai + airy_ai(x + length).ai;
    for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * airy_ai(x + i * h).ai;
    return sum * h / 3.0;
}

}  // namespace rmtinit
