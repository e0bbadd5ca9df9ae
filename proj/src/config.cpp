#include "hheat/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "hheat/errors.hpp"

namespace hheat {

namespace {

void reject_unknown(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || item.key() == k;
        if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
}

double number(const Json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    const Json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
    return v.get<double>();
}

BathSpec bath_from_json(const Json& j, const std::string& where) {
    reject_unknown(j, where, {"rate", "occupation", "temperature"});
    BathSpec b;
    b.rate = number(j, where, "rate");
    const bool has_n = j.contains("occupation");
    const bool has_t = j.contains("temperature");
    if (has_n == has_t) throw ConfigError(where + ": give exactly one of 'occupation' or 'temperature'");
    if (has_n) b.occupation = number(j, where, "occupation");
    if (has_t) b.temperature = number(j, where, "temperature");
    return b;
}

Json bath_to_json(const BathSpec& b) {
    Json j{{"rate", b.rate}};
    if (b.occupation) j["occupation"] = *b.occupation;
    if (b.temperature) j["temperature"] = *b.temperature;
    return j;
}

}  // namespace

LatticeSpec spec_from_json(const Json& j) {
    reject_unknown(j, "spec", {"dims", "omega", "coupling", "dephasing", "bath_hot", "bath_cold"});
    LatticeSpec s;
    if (!j.contains("dims") || !j.at("dims").is_array()) throw ConfigError("spec: 'dims' must be an array of integers");
    for (const auto& d : j.at("dims")) {
        if (!d.is_number_integer()) throw ConfigError("spec: 'dims' must be an array of integers");
        s.dims.push_back(d.get<int>());
    }
    s.omega = number(j, "spec", "omega");
    s.coupling = number(j, "spec", "coupling");
    if (j.contains("dephasing")) s.dephasing_rate = number(j, "spec", "dephasing");
    if (!j.contains("bath_hot")) throw ConfigError("spec: missing key 'bath_hot'");
    if (!j.contains("bath_cold")) throw ConfigError("spec: missing key 'bath_cold'");
    s.bath_hot = bath_from_json(j.at("bath_hot"), "spec.bath_hot");
    s.bath_cold = bath_from_json(j.at("bath_cold"), "spec.bath_cold");
    return s;
}

Json spec_to_json(const LatticeSpec& spec) {
    return Json{{"dims", spec.dims},
                {"omega", spec.omega},
                {"coupling", spec.coupling},
                {"dephasing", spec.dephasing_rate},
                {"bath_hot", bath_to_json(spec.bath_hot)},
                {"bath_cold", bath_to_json(spec.bath_cold)}};
}

SolverOptions SolverConfig::options() const {
    SolverOptions o;
    o.method = solver_method_from_string(method);
    o.tol = tol;
    o.dt = dt;
    o.t_final = t_final;
    return o;
}

RunConfig run_config_from_json(const Json& j) {
    if (j.is_object() && j.contains("kind") && j.contains("config")) return run_config_from_json(j.at("config"));

    reject_unknown(j, "config", {"spec", "solver", "output"});
    if (!j.contains("spec")) throw ConfigError("config: missing key 'spec'");
    RunConfig c;
    c.spec = spec_from_json(j.at("spec"));
    if (j.contains("solver")) {
        const Json& s = j.at("solver");
        reject_unknown(s, "solver", {"method", "tol", "dt", "t_final"});
        if (s.contains("method")) {
            if (!s.at("method").is_string()) throw ConfigError("solver: 'method' must be a string");
            c.solver.method = s.at("method").get<std::string>();
            try {
                (void)solver_method_from_string(c.solver.method);
            } catch (const DomainError& e) {
                throw ConfigError(std::string("solver: ") + e.what());
            }
        }
        if (s.contains("tol")) c.solver.tol = number(s, "solver", "tol");
        if (s.contains("dt")) c.solver.dt = number(s, "solver", "dt");
        if (s.contains("t_final")) c.solver.t_final = number(s, "solver", "t_final");
    }
    if (j.contains("output")) {
        const Json& o = j.at("output");
        reject_unknown(o, "output", {"path", "format"});
        if (o.contains("path")) c.output.path = o.at("path").get<std::string>();
        if (o.contains("format")) c.output.format = o.at("format").get<std::string>();
        if (c.output.format != "csv" && c.output.format != "json") {
            throw ConfigError("output: format must be 'csv' or 'json'");
        }
    }
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return run_config_from_json(j);
}

Json run_config_to_json(const RunConfig& config) {
    return Json{{"spec", spec_to_json(config.spec)},
                {"solver",
                 {{"method", config.solver.method},
                  {"tol", config.solver.tol},
                  {"dt", config.solver.dt},
                  {"t_final", config.solver.t_final}}}};
}

}  // namespace hheat
