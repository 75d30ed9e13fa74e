#pragma once

#include <iosfwd>

#include "arproc/config.hpp"

namespace arproc {

inline constexpr const char* kToolVersion = "arproc 1.0.0";

/// Execute a subcommand (stability | stationary | transient | moments |
/// iterate | simulate | validate) against a parsed config, writing the
/// artifact to `out`. Returns the process exit code: 0 ok, 2 schema error,
/// 3 numeric failure, 4 validation failure.
int run(const std::string& subcommand, const RunConfig& cfg, std::ostream& out);

}  // namespace arproc
