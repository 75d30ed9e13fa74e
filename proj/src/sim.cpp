#include "arproc/sim.hpp"

#include <algorithm>
#include <cmath>

#include "arproc/errors.hpp"

namespace arproc {

namespace {

void require_simulable(const ModelSpec& spec) {
    if (!spec.A.simulable() || !spec.B.simulable())
        throw DomainError("simulate: A and B must be simulable laws");
}

double step(const ModelSpec& spec, double w, RngStream& rng) {
    double v = spec.V.sample(rng);
    double y = spec.B.sample(rng) - spec.A.sample(rng);
    return std::max(v * w + y, 0.0);
}

// Replications are split across plain/antithetic pairs when requested;
// pairing the same stream id with the flipped uniforms keeps the pair
// average unbiased while cancelling much of the path-level noise.
struct RepPlan {
    std::uint64_t stream;
    bool anti;
};

std::vector<RepPlan> plan_replications(const SimConfig& cfg) {
    std::vector<RepPlan> plan;
    plan.reserve(size_t(cfg.replications));
    for (long k = 0; k < cfg.replications; ++k) {
        if (cfg.antithetic)
            plan.push_back({std::uint64_t(k / 2), k % 2 == 1});
        else
            plan.push_back({std::uint64_t(k), false});
    }
    return plan;
}

SimEstimate summarize(const std::vector<double>& xs, std::uint64_t seed) {
    SimEstimate e;
    e.seed = seed;
    e.n_effective = long(xs.size());
    if (xs.empty()) return e;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= double(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    if (xs.size() > 1) var /= double(xs.size() - 1);
    e.value = mean;
    e.std_error = xs.size() > 1 ? std::sqrt(var / double(xs.size())) : 0.0;
    return e;
}

}  // namespace

std::vector<double> simulate_path(const ModelSpec& spec, long steps, RngStream& rng) {
    require_simulable(spec);
    std::vector<double> w;
    w.reserve(size_t(steps) + 1);
    w.push_back(spec.w0);
    for (long i = 0; i < steps; ++i) w.push_back(step(spec, w.back(), rng));
    return w;
}

StationaryEstimates estimate_stationary(const ModelSpec& spec, const SimConfig& cfg,
                                        const std::vector<double>& s_values) {
    require_simulable(spec);
    if (cfg.burn_in >= cfg.path_length)
        throw DomainError("estimate_stationary: burn_in must be below path_length");
    auto plan = plan_replications(cfg);

    std::vector<double> atom_reps, mean_reps;
    std::vector<std::vector<double>> lst_reps(s_values.size());
    for (auto& rp : plan) {
        RngStream rng(cfg.seed, rp.stream, rp.anti);
        double w = spec.w0;
        long n = 0;
        double atom = 0.0, sum = 0.0;
        std::vector<double> lst_sum(s_values.size(), 0.0);
        for (long i = 0; i < cfg.path_length; ++i) {
            w = step(spec, w, rng);
            if (i < cfg.burn_in) continue;
            ++n;
            if (w == 0.0) atom += 1.0;
            sum += w;
            for (size_t j = 0; j < s_values.size(); ++j) lst_sum[j] += std::exp(-s_values[j] * w);
        }
        atom_reps.push_back(atom / double(n));
        mean_reps.push_back(sum / double(n));
        for (size_t j = 0; j < s_values.size(); ++j) lst_reps[j].push_back(lst_sum[j] / double(n));
    }

    StationaryEstimates out;
    out.atom = summarize(atom_reps, cfg.seed);
    out.mean = summarize(mean_reps, cfg.seed);
    for (size_t j = 0; j < s_values.size(); ++j)
        out.lst[s_values[j]] = summarize(lst_reps[j], cfg.seed);
    return out;
}

SimEstimate estimate_geometric_transform(const ModelSpec& spec, double r, double s,
                                         const SimConfig& cfg) {
    require_simulable(spec);
    if (!(r >= 0.0 && r < 1.0))
        throw DomainError("estimate_geometric_transform: need 0 <= r < 1");
    auto plan = plan_replications(cfg);
    std::vector<double> reps;
    reps.reserve(plan.size());
    for (auto& rp : plan) {
        RngStream rng(cfg.seed, rp.stream, rp.anti);
        // N ~ Geometric(1-r) on {0,1,...}: N = floor(log U / log r) for r > 0.
        long n = 0;
        if (r > 0.0) {
            double u = rng.uniform();
            n = long(std::floor(std::log(u) / std::log(r)));
        }
        double w = spec.w0;
        for (long i = 0; i < n; ++i) w = step(spec, w, rng);
        reps.push_back(std::exp(-s * w));
    }
    return summarize(reps, cfg.seed);
}

SimEstimate estimate_transient_atom(const ModelSpec& spec, long i, const SimConfig& cfg) {
    require_simulable(spec);
    if (i < 0) throw DomainError("estimate_transient_atom: index must be non-negative");
    auto plan = plan_replications(cfg);
    std::vector<double> reps;
    reps.reserve(plan.size());
    for (auto& rp : plan) {
        RngStream rng(cfg.seed, rp.stream, rp.anti);
        double w = spec.w0;
        for (long k = 0; k < i; ++k) w = step(spec, w, rng);
        reps.push_back(w == 0.0 ? 1.0 : 0.0);
    }
    return summarize(reps, cfg.seed);
}

}  // namespace arproc
