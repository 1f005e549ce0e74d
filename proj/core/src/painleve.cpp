#include "rmtinit/painleve.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rmtinit/airy.hpp"

namespace rmtinit {

namespace {

using Real = long double;

template <std::size_t D>
using State = std::array<Real, D>;

// Dormand-Prince 5(4) tableau.
constexpr Real c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
constexpr Real a21 = 1.0L / 5;
constexpr Real a31 = 3.0L / 40, a32 = 9.0L / 40;
constexpr Real a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
constexpr Real a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561, a54 = -212.0L / 729;
constexpr Real a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247, a64 = 49.0L / 176,
               a65 = -5103.0L / 18656;
constexpr Real b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192, b5 = -2187.0L / 6784, b6 = 11.0L / 84;
constexpr Real e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920, e5 = -17253.0L / 339200,
               e6 = 22.0L / 525, e7 = -1.0L / 40;

template <std::size_t D>
State<D> axpy(const State<D>& y, Real h, std::initializer_list<std::pair<Real, const State<D>*>> terms) {
    State<D> out = y;
    for (const auto& [coef, k] : terms)
        for (std::size_t i = 0; i < D; ++i) out[i] += h * coef * (*k)[i];
    return out;
}

/// Adaptive integration of y' = f(t, y) from t0 to t1 (either direction).
/// `h` carries the step size between calls.
template <std::size_t D, typename Rhs>
void integrate(Rhs&& f, Real t0, Real t1, State<D>& y, Real& h, const PainleveSolverOptions& opt) {
    const Real dir = t1 < t0 ? -1.0L : 1.0L;
    h = dir * std::abs(h);
    Real t = t0;
    State<D> k1 = f(t, y);
    int guard = 0;
    while (dir * (t1 - t) > 0) {
        if (++guard > 10'000'000) throw std::runtime_error("solve_painleve_ii: step budget exhausted");
        if (dir * (t + h - t1) > 0) h = t1 - t;
        const State<D> k2 = f(t + c2 * h, axpy<D>(y, h, {{a21, &k1}}));
        const State<D> k3 = f(t + c3 * h, axpy<D>(y, h, {{a31, &k1}, {a32, &k2}}));
        const State<D> k4 = f(t + c4 * h, axpy<D>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<D> k5 = f(t + c5 * h, axpy<D>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<D> k6 =
            f(t + h, axpy<D>(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<D> y_new = axpy<D>(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State<D> k7 = f(t + h, y_new);

        Real err = 0;
        for (std::size_t i = 0; i < D; ++i) {
            const Real e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const Real scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(e) / scale);
        }
        if (!std::isfinite(static_cast<double>(err))) throw std::runtime_error("solve_painleve_ii: non-finite step");
        if (err <= 1) {
            t += h;
            y = y_new;
            k1 = k7;
            if (std::abs(y[0]) > opt.divergence_bound)
                throw std::runtime_error("solve_painleve_ii: integration diverged (|q| > bound); step size unstable");
        }
        const Real factor = err == 0 ? 5.0L : std::clamp(0.9L * std::pow(err, -0.2L), 0.2L, 5.0L);
        h *= factor;
        if (std::abs(h) < 1e-14L) throw std::runtime_error("solve_painleve_ii: step size underflow");
    }
}

constexpr std::array<double, 7> kLeftCoefficients = {
    1.0 / 8, -73.0 / 128, 10657.0 / 1024, -13912277.0 / 32768,
    8045883943.0 / 262144, -14518451390349.0 / 4194304, 18847128706420641.0 / 33554432};

std::uint64_t fnv_bytes(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffU;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double hermite(double h, double s, double y0, double y1, double m0, double m1) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * m1;
}

}  // namespace

std::uint64_t PainleveGridSpec::hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv_bytes(h, std::bit_cast<std::uint64_t>(t_min));
    h = fnv_bytes(h, std::bit_cast<std::uint64_t>(t_max));
    h = fnv_bytes(h, static_cast<std::uint64_t>(points));
    return h;
}

double hastings_mcleod_left_asymptote(double t) {
    if (t >= 0) throw std::domain_error("hastings_mcleod_left_asymptote: needs t < 0");
    const double t3inv = 1.0 / (t * t * t);
    double sum = 1.0, pw = 1.0, last = 1.0;
    for (double c : kLeftCoefficients) {
        pw *= t3inv;
        const double term = c * pw;
        if (std::abs(term) > last) break;
        last = std::abs(term);
        sum += term;
    }
    return std::sqrt(-t / 2.0) * sum;
}

PainleveSolution::PainleveSolution(std::vector<double> grid, std::vector<double> q,
                                   std::vector<double> q2_tail, std::vector<double> ln_f1)
    : grid_(std::move(grid)), q_(std::move(q)), q2_tail_(std::move(q2_tail)), ln_f1_(std::move(ln_f1)) {
    const std::size_t n = grid_.size();
    if (n < 2) throw std::invalid_argument("PainleveSolution: need at least 2 grid points");
    if (q_.size() != n || q2_tail_.size() != n || ln_f1_.size() != n)
        throw std::invalid_argument("PainleveSolution: column lengths differ");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::isfinite(grid_[i]) && std::isfinite(q_[i]) && std::isfinite(q2_tail_[i]) &&
              std::isfinite(ln_f1_[i])))
            throw std::invalid_argument("PainleveSolution: non-finite entry");
        if (i > 0 && !(grid_[i] > grid_[i - 1]))
            throw std::invalid_argument("PainleveSolution: grid not strictly increasing");
        if (!(q_[i] > 0)) throw std::invalid_argument("PainleveSolution: q must be positive");
        if (q2_tail_[i] < 0) throw std::invalid_argument("PainleveSolution: negative tail integral");
        if (i > 0 && q2_tail_[i] > q2_tail_[i - 1])
            throw std::invalid_argument("PainleveSolution: tail integral increases");
        if (ln_f1_[i] > 0) throw std::invalid_argument("PainleveSolution: ln F1 must be <= 0");
        if (i > 0 && ln_f1_[i] < ln_f1_[i - 1])
            throw std::invalid_argument("PainleveSolution: ln F1 decreases");
    }
    if (ln_f1_.back() < -1e-6) throw std::invalid_argument("PainleveSolution: ln F1 at right edge below -1e-6");
}

void PainleveSolution::check_range(double t) const {
    if (!contains(t)) {
        std::ostringstream msg;
        msg << "abscissa " << t << " outside Painleve grid [" << t_min() << ", " << t_max() << "]";
        throw std::out_of_range(msg.str());
    }
}

std::size_t PainleveSolution::cell_of(double t) const {
    auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    std::size_t k = it == grid_.begin() ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
    return std::min(k, grid_.size() - 2);
}

double PainleveSolution::q_at(double t) const {
    check_range(t);
    const std::size_t k = cell_of(t);
    if (grid_.size() < 4) {
        const double s = (t - grid_[k]) / (grid_[k + 1] - grid_[k]);
        return q_[k] + s * (q_[k + 1] - q_[k]);
    }
    const std::size_t lo = std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, grid_.size() - 4);
    double value = 0;
    for (std::size_t i = lo; i < lo + 4; ++i) {
        double basis = 1;
        for (std::size_t j = lo; j < lo + 4; ++j)
            if (j != i) basis *= (t - grid_[j]) / (grid_[i] - grid_[j]);
        value += basis * q_[i];
    }
    return value;
}

double PainleveSolution::q2_tail_at(double t) const {
    check_range(t);
    const std::size_t k = cell_of(t);
    const double h = grid_[k + 1] - grid_[k];
    return hermite(h, (t - grid_[k]) / h, q2_tail_[k], q2_tail_[k + 1], -q_[k] * q_[k],
                   -q_[k + 1] * q_[k + 1]);
}

double PainleveSolution::ln_f1_at(double t) const {
    check_range(t);
    const std::size_t k = cell_of(t);
    const double h = grid_[k + 1] - grid_[k];
    const double s = (t - grid_[k]) / h;
    const double delta = (ln_f1_[k + 1] - ln_f1_[k]) / h;
    if (delta <= 0) return ln_f1_[k] + s * (ln_f1_[k + 1] - ln_f1_[k]);
    double m0 = 0.5 * (q2_tail_[k] + q_[k]);
    double m1 = 0.5 * (q2_tail_[k + 1] + q_[k + 1]);
    // Fritsch-Carlson: keeps the cubic monotone on the cell.
    const double alpha = m0 / delta, beta = m1 / delta;
    const double r2 = alpha * alpha + beta * beta;
    if (r2 > 9.0) {
        const double tau = 3.0 / std::sqrt(r2);
        m0 *= tau;
        m1 *= tau;
    }
    return hermite(h, s, ln_f1_[k], ln_f1_[k + 1], m0, m1);
}

double PainleveSolution::d_ln_f1_at(double t) const {
    return 0.5 * (q2_tail_at(t) + q_at(t));
}

PainleveSolution solve_painleve_ii(double t_min, double t_max, int points, const PainleveSolverOptions& opt) {
    if (!(t_min < t_max)) throw std::invalid_argument("solve_painleve_ii: need t_min < t_max");
    if (points < 2) throw std::invalid_argument("solve_painleve_ii: need at least 2 points");
    if (t_max < 6.0) throw std::invalid_argument("solve_painleve_ii: t_max must be >= 6 for the Airy boundary");

    const auto n = static_cast<std::size_t>(points);
    std::vector<double> grid(n), q(n), tail(n), lnf(n);
    const Real span = static_cast<Real>(t_max) - t_min;
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = static_cast<double>(t_min + span * static_cast<Real>(i) / static_cast<Real>(n - 1));
    grid.back() = t_max;

    const AiryValue edge = airy_ai(t_max);
    const double x = t_max;
    const double tail_sq = edge.ai_prime * edge.ai_prime - x * edge.ai * edge.ai;
    const double tail_weighted = std::max(
        0.0, 2.0 / 3.0 * (x * x * edge.ai * edge.ai - x * edge.ai_prime * edge.ai_prime) -
                 edge.ai * edge.ai_prime / 3.0);
    const double ln_f1_edge = -0.5 * (tail_weighted + airy_ai_tail_integral(x));

    auto full = [](Real t, const State<4>& y) -> State<4> {
        return {y[1], 2 * y[0] * y[0] * y[0] + t * y[0], -y[0] * y[0], 0.5L * (y[2] + y[0])};
    };
    auto reduced = [](Real t, const State<2>& y) -> State<2> {
        const Real qa = hastings_mcleod_left_asymptote(static_cast<double>(t));
        return {-qa * qa, 0.5L * (y[0] + qa)};
    };

    State<4> y{edge.ai, edge.ai_prime, std::max(0.0, tail_sq), ln_f1_edge};
    State<2> z{};
    bool spliced = false;
    Real h = -1e-3L;
    q[n - 1] = static_cast<double>(y[0]);
    tail[n - 1] = static_cast<double>(y[2]);
    lnf[n - 1] = static_cast<double>(y[3]);

    for (std::size_t i = n - 1; i-- > 0;) {
        const Real from = grid[i + 1], to = grid[i];
        if (!spliced && to < opt.asymptotic_splice) {
            const Real splice = std::max<Real>(opt.asymptotic_splice, to);
            if (from > splice) integrate<4>(full, from, splice, y, h, opt);
            z = {y[2], y[3]};
            spliced = true;
            integrate<2>(reduced, splice, to, z, h, opt);
        } else if (spliced) {
            integrate<2>(reduced, from, to, z, h, opt);
        } else {
            integrate<4>(full, from, to, y, h, opt);
        }
        if (spliced) {
            q[i] = hastings_mcleod_left_asymptote(grid[i]);
            tail[i] = static_cast<double>(z[0]);
            lnf[i] = static_cast<double>(z[1]);
        } else {
            q[i] = static_cast<double>(y[0]);
            tail[i] = static_cast<double>(y[2]);
            lnf[i] = static_cast<double>(y[3]);
        }
    }
    for (double& v : lnf) v = std::min(v, 0.0);
    return PainleveSolution(std::move(grid), std::move(q), std::move(tail), std::move(lnf));
}

void write_painleve_csv(const PainleveSolution& sol, const PainleveGridSpec& spec, std::ostream& out) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "# grid_hash=%016llx t_min=%.17g t_max=%.17g points=%d\n",
                  static_cast<unsigned long long>(spec.hash()), spec.t_min, spec.t_max, spec.points);
    out << buf << "t,q,q2_tail,ln_f1\n";
    for (std::size_t i = 0; i < sol.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", sol.grid()[i], sol.q()[i], sol.q2_tail()[i],
                      sol.ln_f1()[i]);
        out << buf;
    }
}

std::optional<PainleveSolution> read_painleve_csv(std::istream& in, const PainleveGridSpec& spec) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# grid_hash=", 0) != 0)
        throw std::runtime_error("painleve csv: missing grid_hash comment");
    const std::uint64_t stored = std::strtoull(line.c_str() + 12, nullptr, 16);
    if (stored != spec.hash()) return std::nullopt;
    if (!std::getline(in, line) || line != "t,q,q2_tail,ln_f1")
        throw std::runtime_error("painleve csv: unexpected header '" + line + "'");
    std::vector<double> cols[4];
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        for (auto& col : cols) {
            if (!std::getline(row, cell, ',')) throw std::runtime_error("painleve csv: short row '" + line + "'");
            col.push_back(std::stod(cell));
        }
    }
    if (cols[0].size() != static_cast<std::size_t>(spec.points))
        throw std::runtime_error("painleve csv: row count does not match the grid");
    return PainleveSolution(std::move(cols[0]), std::move(cols[1]), std::move(cols[2]), std::move(cols[3]));
}

std::string painleve_cache_name(const PainleveGridSpec& spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "painleve_%016llx.csv", static_cast<unsigned long long>(spec.hash()));
    return buf;
}

PainleveSolution load_or_solve_painleve(const std::filesystem::path& cache_dir, const PainleveGridSpec& spec) {
    if (!cache_dir.empty()) {
        const auto file = cache_dir / painleve_cache_name(spec);
        std::ifstream in(file);
        if (in) {
            try {
                if (auto sol = read_painleve_csv(in, spec)) return std::move(*sol);
            } catch (const std::exception&) {
                // fall through and regenerate a corrupt cache entry
            }
        }
    }
    PainleveSolution sol = solve_painleve_ii(spec);
    if (!cache_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cache_dir, ec);
        std::ofstream out(cache_dir / painleve_cache_name(spec));
        if (out) write_painleve_csv(sol, spec, out);
    }
    return sol;
}

std::filesystem::path painleve_cache_dir_from_env() {
    const char* dir = std::getenv("LANDSCAPE_INIT_CACHE");
    return dir ? std::filesystem::path(dir) : std::filesystem::path{};
}

}  // namespace rmtinit
