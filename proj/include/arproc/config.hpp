#pragma once

#include <optional>
#include <string>

#include "arproc/sim.hpp"

namespace arproc {

/// Fully validated run description parsed from a JSON config.
struct RunConfig {
    ModelSpec model{ModelKind::I, MultiplierSpec::Uniform01(), DistSpec::Exponential(1.0),
                    DistSpec::Exponential(1.0), 0.0};
    QuadRule quad;
    SimConfig sim;
    std::vector<double> r_values{0.5};
    std::vector<double> s_grid{0.0, 0.5, 1.0, 2.0, 5.0};
    int moments_order = 5;
    int iterate_steps = 100;
    std::string output_format = "csv";  // csv | json
    std::string output_path = "-";      // "-" = stdout
    std::string canonical;              // canonical re-dump used for hashing/echo
};

/// Parse and validate a JSON config. Unknown keys are rejected; every
/// violation raises SchemaError naming the offending field.
RunConfig parse_config(const std::string& text);

/// FNV-1a hash of the canonical config dump, for output metadata.
std::string config_hash(const RunConfig& cfg);

}  // namespace arproc
