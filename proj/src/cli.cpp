#include "hheat/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "hheat/checks.hpp"
#include "hheat/config.hpp"
#include "hheat/errors.hpp"
#include "hheat/experiments.hpp"
#include "hheat/export.hpp"
#include "hheat/observables.hpp"

namespace hheat {

namespace {

struct CommonFlags {
    std::string config;
    std::string out;
    std::string format;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config, "Run config (JSON)")->required();
    cmd->add_option("--out", flags.out, "Output path (default: standard output)");
    cmd->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

RunConfig load(const CommonFlags& flags) {
    RunConfig cfg = load_run_config(flags.config);
    if (!flags.out.empty()) cfg.output.path = flags.out;
    if (!flags.format.empty()) cfg.output.format = flags.format;
    return cfg;
}

// Prints warnings; throws ValidationError on the first error.
void check_spec(const LatticeSpec& spec, std::ostream& err) {
    for (const auto& d : validate_spec(spec)) {
        if (d.severity == Severity::Warning) err << "warning: " << d.message << '\n';
    }
    require_valid(spec);
}

std::filesystem::path sibling(const std::filesystem::path& path, const std::string& name) {
    auto p = path;
    p.replace_filename(path.stem().string() + "." + name + path.extension().string());
    return p;
}

void write_tables(const std::vector<CsvTable>& tables, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        for (std::size_t i = 0; i < tables.size(); ++i) {
            if (i) out << '\n';
            out << "# " << tables[i].name << '\n';
            write_csv(out, tables[i]);
        }
        return;
    }
    for (std::size_t i = 0; i < tables.size(); ++i) {
        const std::filesystem::path target = i == 0 ? std::filesystem::path(path) : sibling(path, tables[i].name);
        std::ofstream file(target);
        if (!file) throw ConfigError("cannot write '" + target.string() + "'");
        write_csv(file, tables[i]);
    }
}

void write_json(const Json& doc, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << doc.dump(2) << '\n';
        return;
    }
    std::ofstream file(path);
    if (!file) throw ConfigError("cannot write '" + path + "'");
    file << doc.dump(2) << '\n';
}

int cmd_steady(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load(flags);
    check_spec(cfg.spec, err);
    const GeneratorParts G = build_lattice_generator(cfg.spec);
    const SteadyState ss = solve_steady_state(G, cfg.solver.options());
    const ObservableReport report = make_report(ss.C, G);

    std::optional<ChainClosedForm> cf;
    if (cfg.spec.dims.back() >= 3) cf = chain_closed_form_dephased(cfg.spec.dims.back(), ChainParams::from_spec(cfg.spec));
    const double J_closed = cf ? lattice_current(cfg.spec.dims, cf->current) : std::nan("");

    if (cfg.output.format == "json") {
        Json doc{{"kind", "steady"},
                 {"config", run_config_to_json(cfg)},
                 {"steady_state", steady_state_to_json(ss)},
                 {"observables", report_to_json(report)}};
        if (cf) {
            Json c = closed_form_to_json(*cf);
            c["J_lattice"] = J_closed;
            doc["closed_form"] = c;
        }
        write_json(doc, cfg.output.path, out);
    } else {
        CsvTable scalars = scalars_csv(report, ss);
        scalars.rows.push_back({"J_closed", format_double(J_closed)});
        write_tables({moments_csv(ss.C), profile_csv(report), scalars}, cfg.output.path, out);
    }
    return kExitOk;
}

struct SweepFlags {
    std::string axis;
    std::string values;
    std::string fit;
    int cap = 64;
};

std::pair<double, double> parse_window(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError("--fit expects LO:HI");
    try {
        return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ConfigError("--fit expects LO:HI with numeric bounds");
    }
}

Json parse_values(const std::string& s) {
    try {
        Json v = Json::parse(s);
        if (!v.is_array() || v.empty()) throw ConfigError("--values must be a nonempty JSON array");
        return v;
    } catch (const Json::parse_error&) {
        throw ConfigError("--values is not a JSON array: " + s);
    }
}

int cmd_sweep(const CommonFlags& flags, const SweepFlags& sf, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load(flags);
    check_spec(cfg.spec, err);
    const Json values = parse_values(sf.values);

    SweepOptions opts;
    opts.numeric_cap = sf.cap;
    opts.solver = cfg.solver.options();
    if (!sf.fit.empty()) opts.fit_window = parse_window(sf.fit);

    Json doc{{"kind", "sweep"}, {"config", run_config_to_json(cfg)}, {"axis", sf.axis}};
    std::vector<CsvTable> tables;
    try {
        if (sf.axis == "length") {
            const auto r = sweep_length(cfg.spec, values.get<std::vector<int>>(), opts);
            doc["result"] = sweep_to_json(r);
            tables.push_back(sweep_csv(r));
            if (r.fit) tables.push_back(fit_csv(*r.fit));
        } else if (sf.axis == "dephasing") {
            const auto r = sweep_dephasing(cfg.spec, values.get<std::vector<double>>(), opts);
            doc["result"] = sweep_to_json(r);
            tables.push_back(sweep_csv(r));
            if (r.fit) tables.push_back(fit_csv(*r.fit));
        } else if (sf.axis == "dimension") {
            const auto rows = dimension_study(cfg.spec, values.get<std::vector<std::vector<int>>>(), opts);
            doc["result"] = dimension_to_json(rows);
            tables.push_back(dimension_csv(rows));
        } else {
            const auto profiles = profile_study(cfg.spec, values.get<std::vector<double>>(), opts);
            doc["result"] = profiles_to_json(profiles);
            tables.push_back(profiles_csv(profiles));
        }
    } catch (const Json::type_error&) {
        throw ConfigError("--values has the wrong element type for axis '" + sf.axis + "'");
    } catch (const DomainError& e) {
        throw ValidationError(e.what());
    }

    if (cfg.output.format == "json") {
        write_json(doc, cfg.output.path, out);
    } else {
        write_tables(tables, cfg.output.path, out);
    }
    return kExitOk;
}

std::string short_double(double v) {
    if (!std::isfinite(v)) return format_double(v);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

int cmd_validate(const CommonFlags& flags, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load(flags);
    for (const auto& d : validate_spec(cfg.spec)) {
        if (d.severity == Severity::Warning) err << "warning: " << d.message << '\n';
    }
    const auto checks = run_oracle_checks(cfg.spec, cfg.solver.options());

    out << std::left << std::setw(7) << "result" << std::setw(24) << "check" << std::setw(12) << "value"
        << std::setw(12) << "threshold" << " detail\n";
    for (const auto& c : checks) {
        out << std::setw(7) << (c.passed ? "PASS" : "FAIL") << std::setw(24) << c.name << std::setw(12)
            << short_double(c.value) << std::setw(12) << short_double(c.threshold) << ' ' << c.detail << '\n';
    }
    const bool ok = all_passed(checks);
    if (!cfg.output.path.empty()) {
        if (cfg.output.format == "json") {
            write_json(Json{{"kind", "validate"}, {"config", run_config_to_json(cfg)}, {"passed", ok},
                            {"checks", checks_to_json(checks)}},
                       cfg.output.path, out);
        } else {
            write_tables({checks_csv(checks)}, cfg.output.path, out);
        }
    }
    if (!ok) {
        for (const auto& c : checks) {
            if (!c.passed) {
                err << "error: invariant '" << c.name << "' failed";
                if (!c.detail.empty()) err << ": " << c.detail;
                err << '\n';
                break;
            }
        }
        return kExitCheckFailed;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady states and heat currents of boundary-driven oscillator lattices", "hheat"};
    app.require_subcommand(1);

    CommonFlags steady_flags, sweep_common, validate_flags;
    SweepFlags sweep_flags;

    auto* steady = app.add_subcommand("steady", "Solve the steady state and report observables");
    add_common(steady, steady_flags);

    auto* sweep = app.add_subcommand("sweep", "Current against length, dephasing or lattice shape");
    add_common(sweep, sweep_common);
    sweep->add_option("--axis", sweep_flags.axis, "Sweep axis")
        ->required()
        ->check(CLI::IsMember({"length", "dephasing", "dimension", "profile"}));
    sweep->add_option("--values", sweep_flags.values, "JSON array, e.g. [5,10,20] or [[4,4],[3,3,3]]")->required();
    sweep->add_option("--fit", sweep_flags.fit, "Log-log slope window LO:HI");
    sweep->add_option("--cap", sweep_flags.cap, "Largest site count solved numerically")->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "Cross-check closed form, direct solve and relaxation");
    add_common(validate, validate_flags);

    std::vector<const char*> argv{"hheat"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }

    try {
        if (steady->parsed()) return cmd_steady(steady_flags, out, err);
        if (sweep->parsed()) return cmd_sweep(sweep_common, sweep_flags, out, err);
        return cmd_validate(validate_flags, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolverFailed;
    }
}

}  // namespace hheat
