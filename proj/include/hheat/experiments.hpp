#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hheat/analytic.hpp"
#include "hheat/dynamics.hpp"
#include "hheat/model.hpp"

namespace hheat {

/// Ordinary least squares of ln J against ln x over the points with lo <= x <= hi.
struct LogLogFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;
    double rms_residual = 0.0;
};

/// Fixed-order summation, so identical inputs give bit-identical output.
/// Throws DomainError if fewer than two points fall in the window or any value is nonpositive.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi);

struct SweepOptions {
    /// Numeric solves only for lattices with at most this many sites.
    int numeric_cap = 64;
    SolverOptions solver;
    std::optional<std::pair<double, double>> fit_window;
    /// Run sweep points on worker threads; results keep parameter order either way.
    bool parallel = true;
};

struct SweepResult {
    std::string axis;
    std::vector<double> values;
    std::vector<double> J;      ///< closed form
    std::vector<double> J_num;  ///< NaN where the lattice exceeds the numeric cap
    std::vector<double> residual;  ///< steady-state residual of the numeric solve, NaN if absent
    std::optional<LogLogFit> fit;
};

/// Current against chain length N (all N >= 3) at the spec's dephasing rate.
SweepResult sweep_length(const LatticeSpec& base, const std::vector<int>& lengths, const SweepOptions& options = {});

/// Current against dephasing rate at the spec's chain length.
SweepResult sweep_dephasing(const LatticeSpec& base, const std::vector<double>& rates,
                            const SweepOptions& options = {});

struct Profile {
    double dephasing = 0.0;
    std::vector<double> occupation;
    std::vector<double> temperature;
    bool numeric = false;  ///< false: taken from the closed form
};

/// Occupation and temperature profiles of a chain for each dephasing rate.
std::vector<Profile> profile_study(const LatticeSpec& chain, const std::vector<double>& rates,
                                   const SweepOptions& options = {});

struct DimensionRow {
    std::vector<int> dims;
    double J_num = 0.0;      ///< hot-boundary current of the numeric steady state
    double J_formula = 0.0;  ///< transverse volume times chain current
    double q_norm = 0.0;     ///< transverse coherence norm (0 for d = 1)
    double residual = 0.0;
};

/// Numeric lattice current against the volume law. Chain currents come from the
/// closed form for N >= 3 and from a numeric chain solve for N = 2.
std::vector<DimensionRow> dimension_study(const LatticeSpec& base, const std::vector<std::vector<int>>& dims_list,
                                          const SweepOptions& options = {});

std::string dims_label(const std::vector<int>& dims);

}  // namespace hheat
