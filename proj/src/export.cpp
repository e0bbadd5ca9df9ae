#include "hheat/export.hpp"

#include <cmath>
#include <cstdio>

#include "hheat/errors.hpp"

namespace hheat {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const CsvTable& table) {
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
}

CsvTable moments_csv(const MomentMatrix& C) {
    CsvTable t{"moments", {"i", "j", "re", "im"}, {}};
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
        for (Eigen::Index j = 0; j < C.cols(); ++j) {
            t.rows.push_back({std::to_string(i), std::to_string(j), format_double(C(i, j).real()),
                              format_double(C(i, j).imag())});
        }
    }
    return t;
}

CsvTable trajectory_csv(const Trajectory& trajectory) {
    CsvTable t{"trajectory", {"t", "i", "j", "re", "im"}, {}};
    for (std::size_t s = 0; s < trajectory.states.size(); ++s) {
        const auto& C = trajectory.states[s];
        for (Eigen::Index i = 0; i < C.rows(); ++i) {
            for (Eigen::Index j = 0; j < C.cols(); ++j) {
                t.rows.push_back({format_double(trajectory.times[s]), std::to_string(i), std::to_string(j),
                                  format_double(C(i, j).real()), format_double(C(i, j).imag())});
            }
        }
    }
    return t;
}

CsvTable profile_csv(const ObservableReport& report) {
    CsvTable t{"profile", {"site", "occupation", "temperature"}, {}};
    for (std::size_t j = 0; j < report.occupations.size(); ++j) {
        t.rows.push_back({std::to_string(j), format_double(report.occupations[j]), format_double(report.temps[j])});
    }
    return t;
}

CsvTable scalars_csv(const ObservableReport& report, const SteadyState& ss) {
    CsvTable t{"scalars", {"name", "value"}, {}};
    auto add = [&t](const char* name, double v) { t.rows.push_back({name, format_double(v)}); };
    add("J_hot", report.J_hot);
    add("J_cold", report.J_cold);
    add("deph_current", report.deph_current);
    add("coherence_real_max", report.coherence_real_max);
    add("psd_min_eig", report.psd_min_eig);
    add("residual", ss.residual);
    for (const auto& b : report.J_bond) {
        t.rows.push_back({"J_bond_" + std::to_string(b.bond.first) + "_" + std::to_string(b.bond.second),
                          format_double(b.current)});
    }
    return t;
}

CsvTable sweep_csv(const SweepResult& sweep) {
    CsvTable t{"sweep", {"parameter", "J_closed", "J_numeric", "residual"}, {}};
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        t.rows.push_back({format_double(sweep.values[i]), format_double(sweep.J[i]), format_double(sweep.J_num[i]),
                          format_double(sweep.residual[i])});
    }
    return t;
}

CsvTable fit_csv(const LogLogFit& fit) {
    return {"fit",
            {"fit_lo", "fit_hi", "exponent", "intercept", "points", "rms_residual"},
            {{format_double(fit.lo), format_double(fit.hi), format_double(fit.exponent), format_double(fit.intercept),
              std::to_string(fit.points), format_double(fit.rms_residual)}}};
}

CsvTable profiles_csv(const std::vector<Profile>& profiles) {
    CsvTable t{"profiles", {"dephasing", "site", "occupation", "temperature"}, {}};
    for (const auto& p : profiles) {
        for (std::size_t j = 0; j < p.occupation.size(); ++j) {
            t.rows.push_back({format_double(p.dephasing), std::to_string(j), format_double(p.occupation[j]),
                              format_double(p.temperature[j])});
        }
    }
    return t;
}

CsvTable dimension_csv(const std::vector<DimensionRow>& rows) {
    CsvTable t{"dimension", {"dims", "J_num", "J_formula", "q_norm"}, {}};
    for (const auto& r : rows) {
        t.rows.push_back({dims_label(r.dims), format_double(r.J_num), format_double(r.J_formula), format_double(r.q_norm)});
    }
    return t;
}

CsvTable checks_csv(const std::vector<Check>& checks) {
    CsvTable t{"checks", {"check", "passed", "value", "threshold", "detail"}, {}};
    for (const auto& c : checks) {
        std::string detail = c.detail;
        for (char& ch : detail) {
            if (ch == ',') ch = ';';
        }
        t.rows.push_back({c.name, c.passed ? "1" : "0", format_double(c.value), format_double(c.threshold), detail});
    }
    return t;
}

Json matrix_to_json(const Eigen::MatrixXcd& X) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < X.cols(); ++j) row.push_back({X(i, j).real(), X(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd matrix_from_json(const Json& j) {
    if (!j.is_array()) throw ConfigError("matrix: expected an array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXcd X(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const Json& row = j.at(static_cast<std::size_t>(r));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw ConfigError("matrix: rows must be square");
        for (Eigen::Index c = 0; c < n; ++c) {
            const Json& z = row.at(static_cast<std::size_t>(c));
            if (!z.is_array() || z.size() != 2) throw ConfigError("matrix: entries must be [re, im] pairs");
            X(r, c) = {z.at(0).get<double>(), z.at(1).get<double>()};
        }
    }
    return X;
}

Json steady_state_to_json(const SteadyState& ss, bool include_timing) {
    Json solver{{"method", ss.solver.method}, {"dimension", ss.solver.dimension}};
    if (ss.solver.settle_time > 0.0) solver["settle_time"] = ss.solver.settle_time;
    if (include_timing) solver["elapsed_seconds"] = ss.solver.elapsed_seconds;
    return Json{{"C", matrix_to_json(ss.C)}, {"residual", ss.residual}, {"solver", solver}};
}

Json trajectory_to_json(const Trajectory& trajectory) {
    Json states = Json::array();
    for (const auto& C : trajectory.states) states.push_back(matrix_to_json(C));
    return Json{{"times", trajectory.times}, {"states", states}};
}

Json report_to_json(const ObservableReport& report) {
    Json bonds = Json::array();
    for (const auto& b : report.J_bond) bonds.push_back({{"sites", {b.bond.first, b.bond.second}}, {"J", b.current}});
    return Json{{"J_hot", report.J_hot},
                {"J_cold", report.J_cold},
                {"J_bond", bonds},
                {"occupations", report.occupations},
                {"temps", report.temps},
                {"coherence_real_max", report.coherence_real_max},
                {"deph_current", report.deph_current},
                {"psd_min_eig", report.psd_min_eig}};
}

Json closed_form_to_json(const ChainClosedForm& cf) {
    return Json{{"length", cf.length},
                {"x", {cf.x.real(), cf.x.imag()}},
                {"e", cf.e},
                {"nbar", cf.nbar},
                {"dn", cf.dn},
                {"J", cf.current}};
}

Json sweep_to_json(const SweepResult& sweep) {
    Json j{{"axis", sweep.axis},
           {"values", sweep.values},
           {"J_closed", sweep.J},
           {"J_numeric", sweep.J_num},
           {"residual", sweep.residual}};
    if (sweep.fit) {
        j["fit"] = {{"lo", sweep.fit->lo},
                    {"hi", sweep.fit->hi},
                    {"exponent", sweep.fit->exponent},
                    {"intercept", sweep.fit->intercept},
                    {"points", sweep.fit->points},
                    {"rms_residual", sweep.fit->rms_residual}};
    }
    return j;
}

Json profiles_to_json(const std::vector<Profile>& profiles) {
    Json arr = Json::array();
    for (const auto& p : profiles) {
        arr.push_back({{"dephasing", p.dephasing},
                       {"occupation", p.occupation},
                       {"temperature", p.temperature},
                       {"numeric", p.numeric}});
    }
    return arr;
}

Json dimension_to_json(const std::vector<DimensionRow>& rows) {
    Json arr = Json::array();
    for (const auto& r : rows) {
        arr.push_back({{"dims", r.dims}, {"J_num", r.J_num}, {"J_formula", r.J_formula}, {"q_norm", r.q_norm},
                       {"residual", r.residual}});
    }
    return arr;
}

Json checks_to_json(const std::vector<Check>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks) {
        arr.push_back({{"check", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold},
                       {"detail", c.detail}});
    }
    return arr;
}

}  // namespace hheat
