#pragma once

#include <string>
#include <vector>

#include "hheat/dynamics.hpp"
#include "hheat/model.hpp"

namespace hheat {

struct Check {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

/// Cross-checks one spec three ways (closed form, direct solve, RK4 relaxation)
/// and tests every steady-state invariant at fixed thresholds. The solver
/// options tune the relaxation route: its tol is the stopping criterion.
std::vector<Check> run_oracle_checks(const LatticeSpec& spec, const SolverOptions& solver);

bool all_passed(const std::vector<Check>& checks);

}  // namespace hheat
