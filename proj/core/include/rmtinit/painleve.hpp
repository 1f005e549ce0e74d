#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rmtinit {

/// Requested tabulation of the Hastings-McLeod solution.
struct PainleveGridSpec {
    double t_min = -10.0;
    double t_max = 8.0;
    int points = 4096;

    std::uint64_t hash() const noexcept;
};

/// Immutable table of the Hastings-McLeod solution q of q'' = 2q^3 + tq,
/// the squared-tail integral int_t^inf q^2, and ln F1 on a strictly
/// increasing grid. Off-node values are interpolated: q by local cubic
/// Lagrange, the tail and ln F1 by Hermite cubics using their exact
/// derivatives (-q^2 and (tail + q)/2), the latter with a monotonicity limiter.
class PainleveSolution {
public:
    /// Validates the invariants (q > 0, tail non-increasing and >= 0, ln F1
    /// non-decreasing and <= 0, right edge >= -1e-6) and throws
    /// std::invalid_argument on violation.
    PainleveSolution(std::vector<double> grid, std::vector<double> q,
                     std::vector<double> q2_tail, std::vector<double> ln_f1);

    std::span<const double> grid() const noexcept { return grid_; }
    std::span<const double> q() const noexcept { return q_; }
    std::span<const double> q2_tail() const noexcept { return q2_tail_; }
    std::span<const double> ln_f1() const noexcept { return ln_f1_; }

    double t_min() const noexcept { return grid_.front(); }
    double t_max() const noexcept { return grid_.back(); }
    std::size_t size() const noexcept { return grid_.size(); }
    bool contains(double t) const noexcept { return t >= t_min() && t <= t_max(); }

    /// Interpolated values; throw std::out_of_range outside [t_min, t_max].
    double q_at(double t) const;
    double q2_tail_at(double t) const;
    double ln_f1_at(double t) const;

    /// d/dt ln F1 = (tail + q)/2, evaluated at interpolated q and tail.
    double d_ln_f1_at(double t) const;

    /// Index k with grid[k] <= t <= grid[k+1].
    std::size_t cell_of(double t) const;

private:
    void check_range(double t) const;

    std::vector<double> grid_;
    std::vector<double> q_;
    std::vector<double> q2_tail_;
    std::vector<double> ln_f1_;
};

struct PainleveSolverOptions {
    double rel_tol = 1e-14;
    double abs_tol = 1e-20;
    /// Below this abscissa the leftward integration is replaced by the
    /// t -> -inf asymptotic series of q (the Airy-decaying branch loses its
    /// digits there); the tail integral and ln F1 keep being integrated.
    double asymptotic_splice = -7.0;
    double divergence_bound = 1e6;
};

/// Integrates the Hastings-McLeod solution right-to-left from t_max with an
/// adaptive Dormand-Prince 5(4) stepper, starting from the Airy boundary
/// data q = Ai, q' = Ai'. Works in extended precision internally.
/// Throws std::invalid_argument for a bad grid and std::runtime_error when
/// |q| exceeds the divergence bound.
PainleveSolution solve_painleve_ii(double t_min, double t_max, int points,
                                   const PainleveSolverOptions& options = {});

inline PainleveSolution solve_painleve_ii(const PainleveGridSpec& spec,
                                          const PainleveSolverOptions& options = {}) {
    return solve_painleve_ii(spec.t_min, spec.t_max, spec.points, options);
}

/// q(t) ~ sqrt(-t/2) (1 + 1/(8t^3) - 73/(128t^6) + ...), t -> -inf.
double hastings_mcleod_left_asymptote(double t);

/// CSV with a '# grid_hash=...' comment line and columns t,q,q2_tail,ln_f1.
void write_painleve_csv(const PainleveSolution& sol, const PainleveGridSpec& spec, std::ostream& out);

/// Returns std::nullopt when the stored grid hash differs from `spec`.
/// Throws std::runtime_error for malformed content.
std::optional<PainleveSolution> read_painleve_csv(std::istream& in, const PainleveGridSpec& spec);

/// File name used inside a cache directory for `spec`.
std::string painleve_cache_name(const PainleveGridSpec& spec);

/// Loads from `cache_dir` when a matching table exists, otherwise solves and
/// (best effort) stores it. An empty path disables caching.
PainleveSolution load_or_solve_painleve(const std::filesystem::path& cache_dir,
                                        const PainleveGridSpec& spec = {});

/// Cache directory from LANDSCAPE_INIT_CACHE, empty when unset.
std::filesystem::path painleve_cache_dir_from_env();

}  // namespace rmtinit
