#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "arproc/multiplier.hpp"

namespace arproc {

struct SimConfig {
    long replications = 1000;
    long path_length = 10000;
    long burn_in = 1000;
    std::uint64_t seed = 1;
    bool antithetic = false;
};

struct SimEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long n_effective = 0;
    std::uint64_t seed = 0;
};

struct StationaryEstimates {
    SimEstimate atom;
    SimEstimate mean;
    std::map<double, SimEstimate> lst;  // keyed by s
};

/// Exact simulation of W_0..W_steps; reflection yields exact zeros.
std::vector<double> simulate_path(const ModelSpec& spec, long steps, RngStream& rng);

/// Long-run time averages with burn-in; standard errors via
/// replication-level batching.
StationaryEstimates estimate_stationary(const ModelSpec& spec, const SimConfig& cfg,
                                        const std::vector<double>& s_values = {});

/// Unbiased estimator of (1-r) * Psi_W(r,s): per replication draw
/// N ~ Geometric(1-r) on {0,1,...}, run N steps, record exp(-s W_N).
SimEstimate estimate_geometric_transform(const ModelSpec& spec, double r, double s,
                                         const SimConfig& cfg);

/// Fraction of replications with W_i exactly zero.
SimEstimate estimate_transient_atom(const ModelSpec& spec, long i, const SimConfig& cfg);

}  // namespace arproc
