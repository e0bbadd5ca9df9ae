#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hheat/analytic.hpp"
#include "hheat/checks.hpp"
#include "hheat/config.hpp"
#include "hheat/dynamics.hpp"
#include "hheat/experiments.hpp"
#include "hheat/observables.hpp"

namespace hheat {

/// printf("%.17g"); "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double v);

/// A named CSV table. Written to its own file, or as a "# name" section on a stream.
struct CsvTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);

/// One row per matrix entry: i, j, re, im.
CsvTable moments_csv(const MomentMatrix& C);
/// t, i, j, re, im.
CsvTable trajectory_csv(const Trajectory& trajectory);
/// site, occupation, temperature.
CsvTable profile_csv(const ObservableReport& report);
/// name, value rows for currents and certificates.
CsvTable scalars_csv(const ObservableReport& report, const SteadyState& ss);
/// parameter, J_closed, J_numeric, residual.
CsvTable sweep_csv(const SweepResult& sweep);
/// fit_lo, fit_hi, exponent, intercept, points, rms_residual.
CsvTable fit_csv(const LogLogFit& fit);
/// dephasing, site, occupation, temperature.
CsvTable profiles_csv(const std::vector<Profile>& profiles);
/// dims, J_num, J_formula, q_norm.
CsvTable dimension_csv(const std::vector<DimensionRow>& rows);
/// check, passed, value, threshold, detail.
CsvTable checks_csv(const std::vector<Check>& checks);

/// Complex entries as [re, im] pairs, row-major nested arrays.
Json matrix_to_json(const Eigen::MatrixXcd& X);
Eigen::MatrixXcd matrix_from_json(const Json& j);

/// Solver metadata excludes wall-clock time unless include_timing is set,
/// so repeated runs produce identical bytes.
Json steady_state_to_json(const SteadyState& ss, bool include_timing = false);
Json trajectory_to_json(const Trajectory& trajectory);
Json report_to_json(const ObservableReport& report);
Json closed_form_to_json(const ChainClosedForm& cf);
Json sweep_to_json(const SweepResult& sweep);
Json profiles_to_json(const std::vector<Profile>& profiles);
Json dimension_to_json(const std::vector<DimensionRow>& rows);
Json checks_to_json(const std::vector<Check>& checks);

}  // namespace hheat
