#pragma once

#include <string>

#include "json.hpp"

#include "hheat/dynamics.hpp"
#include "hheat/model.hpp"

namespace hheat {

using Json = nlohmann::json;

/// Parse a lattice spec. Keys: dims, omega, coupling, dephasing (default 0),
/// bath_hot / bath_cold with rate and exactly one of occupation or temperature.
/// Unknown keys raise ConfigError naming the key. Values are not range-checked
/// here; use validate_spec for that.
LatticeSpec spec_from_json(const Json& j);
Json spec_to_json(const LatticeSpec& spec);

struct SolverConfig {
    std::string method = "direct";
    double tol = 1e-10;
    double dt = 0.0;  ///< 0 = default step
    double t_final = 1e5;

    SolverOptions options() const;
};

struct OutputConfig {
    std::string path;  ///< empty = standard output
    std::string format = "csv";
};

struct RunConfig {
    LatticeSpec spec;
    SolverConfig solver;
    OutputConfig output;
};

/// Accepts a run config ({spec, solver?, output?}) or a document previously
/// written by the CLI in JSON form, whose "config" member is re-read.
RunConfig run_config_from_json(const Json& j);
RunConfig load_run_config(const std::string& path);

/// The output block is omitted so re-ingesting a result does not redirect output.
Json run_config_to_json(const RunConfig& config);

}  // namespace hheat
