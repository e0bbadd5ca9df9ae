#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hheat/analytic.hpp"
#include "hheat/checks.hpp"
#include "hheat/cli.hpp"
#include "hheat/config.hpp"
#include "hheat/dynamics.hpp"
#include "hheat/errors.hpp"
#include "hheat/experiments.hpp"
#include "hheat/model.hpp"
#include "hheat/observables.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace hheat;

namespace {

SolverOptions solver_options(const std::string& method, double tol) {
    SolverOptions o;
    o.method = solver_method_from_string(method);
    o.tol = tol;
    return o;
}

SweepOptions sweep_options(int cap, const std::string& method, std::optional<std::pair<double, double>> fit) {
    SweepOptions o;
    o.numeric_cap = cap;
    o.solver = solver_options(method, 1e-10);
    o.fit_window = fit;
    return o;
}

py::dict check_dict(const Check& c) {
    return py::dict("name"_a = c.name, "passed"_a = c.passed, "value"_a = c.value, "threshold"_a = c.threshold,
                    "detail"_a = c.detail);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Steady states and heat currents of boundary-driven harmonic lattices";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<SingularSystemError>(m, "SingularSystemError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());
    py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());
    py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());

    m.def("occupation_from_temperature", &occupation_from_temperature, "omega"_a, "temperature"_a);
    m.def("temperature_from_occupation", &temperature_from_occupation, "omega"_a, "occupation"_a);

    py::class_<BathSpec>(m, "BathSpec")
        .def(py::init<>())
        .def_static("with_occupation", &BathSpec::with_occupation, "rate"_a, "occupation"_a)
        .def_static("with_temperature", &BathSpec::with_temperature, "rate"_a, "temperature"_a)
        .def_readwrite("rate", &BathSpec::rate)
        .def_readwrite("occupation", &BathSpec::occupation)
        .def_readwrite("temperature", &BathSpec::temperature)
        .def("resolved_occupation", &BathSpec::resolved_occupation, "omega"_a);

    py::class_<LatticeSpec>(m, "LatticeSpec")
        .def(py::init<>())
        .def_static("chain", &LatticeSpec::chain, "n"_a, "omega"_a, "coupling"_a, "hot"_a, "cold"_a,
                    "dephasing"_a = 0.0)
        .def_static(
            "from_json", [](const std::string& s) { return spec_from_json(Json::parse(s)); }, "text"_a)
        .def("to_json", [](const LatticeSpec& s) { return spec_to_json(s).dump(); })
        .def_readwrite("dims", &LatticeSpec::dims)
        .def_readwrite("omega", &LatticeSpec::omega)
        .def_readwrite("coupling", &LatticeSpec::coupling)
        .def_readwrite("bath_hot", &LatticeSpec::bath_hot)
        .def_readwrite("bath_cold", &LatticeSpec::bath_cold)
        .def_readwrite("dephasing_rate", &LatticeSpec::dephasing_rate);

    m.def("validate_spec", [](const LatticeSpec& spec) {
        py::list out;
        for (const auto& d : validate_spec(spec)) {
            out.append(py::dict("severity"_a = d.severity == Severity::Error ? "error" : "warning", "code"_a = d.code,
                                "message"_a = d.message));
        }
        return out;
    });

    py::class_<GeneratorParts>(m, "Generator")
        .def_property_readonly("size", &GeneratorParts::size)
        .def_property_readonly("W", &GeneratorParts::dense_W)
        .def_readonly("L", &GeneratorParts::L)
        .def_readonly("M", &GeneratorParts::M)
        .def_readonly("dephasing", &GeneratorParts::deph)
        .def_property_readonly("dims", [](const GeneratorParts& g) { return g.lattice.dims(); })
        .def_property_readonly("hot_sites", [](const GeneratorParts& g) { return g.hot.sites; })
        .def_property_readonly("cold_sites", [](const GeneratorParts& g) { return g.cold.sites; })
        .def("apply", &apply_generator, "C"_a);
    m.def("build_generator", &build_lattice_generator, "spec"_a);

    py::class_<SteadyState>(m, "SteadyState")
        .def_readonly("C", &SteadyState::C)
        .def_readonly("residual", &SteadyState::residual)
        .def_property_readonly("method", [](const SteadyState& s) { return s.solver.method; })
        .def_property_readonly("settle_time", [](const SteadyState& s) { return s.solver.settle_time; });
    m.def(
        "solve_steady_state",
        [](const GeneratorParts& G, const std::string& method, double tol) {
            py::gil_scoped_release release;
            return solve_steady_state(G, solver_options(method, tol));
        },
        "generator"_a, "method"_a = "direct", "tol"_a = 1e-10);
    m.def(
        "evolve",
        [](const MomentMatrix& C0, const GeneratorParts& G, double t_final, double dt) {
            EvolveOptions o;
            o.t_final = t_final;
            o.dt = dt;
            return evolve(C0, G, o).final_state();
        },
        "C0"_a, "generator"_a, "t_final"_a, "dt"_a = 0.0);

    py::class_<ObservableReport>(m, "ObservableReport")
        .def_readonly("J_hot", &ObservableReport::J_hot)
        .def_readonly("J_cold", &ObservableReport::J_cold)
        .def_property_readonly("J_bond",
                               [](const ObservableReport& r) {
                                   std::vector<double> out;
                                   for (const auto& b : r.J_bond) out.push_back(b.current);
                                   return out;
                               })
        .def_readonly("occupations", &ObservableReport::occupations)
        .def_readonly("temps", &ObservableReport::temps)
        .def_readonly("coherence_real_max", &ObservableReport::coherence_real_max)
        .def_readonly("deph_current", &ObservableReport::deph_current)
        .def_readonly("psd_min_eig", &ObservableReport::psd_min_eig);
    m.def("make_report", &make_report, "C"_a, "generator"_a);
    m.def("transverse_coherence_norm", [](const MomentMatrix& C, const GeneratorParts& G) {
        return transverse_coherence_norm(C, G.lattice);
    });

    py::class_<ChainParams>(m, "ChainParams")
        .def(py::init<>())
        .def_static("from_spec", &ChainParams::from_spec)
        .def_readwrite("omega", &ChainParams::omega)
        .def_readwrite("coupling", &ChainParams::coupling)
        .def_readwrite("rate_hot", &ChainParams::rate_hot)
        .def_readwrite("rate_cold", &ChainParams::rate_cold)
        .def_readwrite("n_hot", &ChainParams::n_hot)
        .def_readwrite("n_cold", &ChainParams::n_cold)
        .def_readwrite("dephasing", &ChainParams::dephasing);
    py::class_<ChainClosedForm>(m, "ChainClosedForm")
        .def_readonly("length", &ChainClosedForm::length)
        .def_readonly("x", &ChainClosedForm::x)
        .def_readonly("e", &ChainClosedForm::e)
        .def_readonly("nbar", &ChainClosedForm::nbar)
        .def_readonly("dn", &ChainClosedForm::dn)
        .def_readonly("current", &ChainClosedForm::current)
        .def_property_readonly("coherence", &ChainClosedForm::coherence)
        .def("occupation", &ChainClosedForm::occupation, "site"_a)
        .def("moment_matrix", &ChainClosedForm::moment_matrix);
    m.def("chain_closed_form", &chain_closed_form_dephased, "length"_a, "params"_a);
    m.def("chain_current", &chain_current, "length"_a, "params"_a);
    m.def("lattice_current", &lattice_current, "dims"_a, "chain_current"_a);

    py::class_<LogLogFit>(m, "LogLogFit")
        .def_readonly("exponent", &LogLogFit::exponent)
        .def_readonly("intercept", &LogLogFit::intercept)
        .def_readonly("lo", &LogLogFit::lo)
        .def_readonly("hi", &LogLogFit::hi)
        .def_readonly("points", &LogLogFit::points)
        .def_readonly("rms_residual", &LogLogFit::rms_residual);
    m.def("fit_loglog", &fit_loglog, "x"_a, "y"_a, "lo"_a, "hi"_a);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("axis", &SweepResult::axis)
        .def_readonly("values", &SweepResult::values)
        .def_readonly("J", &SweepResult::J)
        .def_readonly("J_num", &SweepResult::J_num)
        .def_readonly("residual", &SweepResult::residual)
        .def_readonly("fit", &SweepResult::fit);
    m.def(
        "sweep_length",
        [](const LatticeSpec& base, const std::vector<int>& lengths, int cap, std::optional<std::pair<double, double>> fit) {
            py::gil_scoped_release release;
            return sweep_length(base, lengths, sweep_options(cap, "direct", fit));
        },
        "base"_a, "lengths"_a, "cap"_a = 64, "fit"_a = py::none());
    m.def(
        "sweep_dephasing",
        [](const LatticeSpec& base, const std::vector<double>& rates, int cap, std::optional<std::pair<double, double>> fit) {
            py::gil_scoped_release release;
            return sweep_dephasing(base, rates, sweep_options(cap, "direct", fit));
        },
        "base"_a, "rates"_a, "cap"_a = 64, "fit"_a = py::none());

    py::class_<Profile>(m, "Profile")
        .def_readonly("dephasing", &Profile::dephasing)
        .def_readonly("occupation", &Profile::occupation)
        .def_readonly("temperature", &Profile::temperature)
        .def_readonly("numeric", &Profile::numeric);
    m.def(
        "profile_study",
        [](const LatticeSpec& chain, const std::vector<double>& rates, int cap) {
            py::gil_scoped_release release;
            return profile_study(chain, rates, sweep_options(cap, "direct", std::nullopt));
        },
        "chain"_a, "rates"_a, "cap"_a = 64);

    py::class_<DimensionRow>(m, "DimensionRow")
        .def_readonly("dims", &DimensionRow::dims)
        .def_readonly("J_num", &DimensionRow::J_num)
        .def_readonly("J_formula", &DimensionRow::J_formula)
        .def_readonly("q_norm", &DimensionRow::q_norm)
        .def_readonly("residual", &DimensionRow::residual);
    m.def(
        "dimension_study",
        [](const LatticeSpec& base, const std::vector<std::vector<int>>& dims, int cap) {
            py::gil_scoped_release release;
            return dimension_study(base, dims, sweep_options(cap, "direct", std::nullopt));
        },
        "base"_a, "dims"_a, "cap"_a = 64);

    m.def(
        "run_checks",
        [](const LatticeSpec& spec, const std::string& method, double tol) {
            py::list out;
            for (const auto& c : run_oracle_checks(spec, solver_options(method, tol))) out.append(check_dict(c));
            return out;
        },
        "spec"_a, "method"_a = "direct", "tol"_a = 1e-10);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        "args"_a);
}
