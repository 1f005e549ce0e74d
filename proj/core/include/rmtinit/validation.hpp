#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmtinit/painleve.hpp"

namespace rmtinit {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Brute-force oracle checks of the numerical core (Monte Carlo eigenvalue
/// statistics, Painleve consistency, Z_N estimators, landscape census,
/// backprop). Sizes are smaller than the acceptance suite.
std::vector<CheckResult> run_oracle_checks(const PainleveSolution& sol, std::uint64_t seed, unsigned jobs);

}  // namespace rmtinit
