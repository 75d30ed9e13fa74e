#pragma once

#include "arproc/dist.hpp"

namespace arproc {

/// Model III problem data: V ~ Uniform[0,1], A ~ exp(lambda), B any law
/// with a finite mean, W_0 = w0 deterministic.
struct M3Kernel {
    double lambda = 1.0;
    DistSpec B = DistSpec::Exponential(1.0);
    double r = 1.0;  // geometric-epoch parameter; 1 encodes stationarity
    double w0 = 0.0;
    QuadRule rule;

    void validate() const;
};

struct MomentSeq {
    std::vector<double> omegas;  // omega_1..omega_j
    double p_inf = 0.0;
    bool negative_moment = false;    // some omega_k < 0: existence is doubtful
    bool mu_le_lambda = false;       // expansion-interchange caveat regime
};

struct M3Iteration {
    std::vector<std::vector<double>> phi;  // phi[i][g] = Phi_{W_i}(s_grid[g]), i = 0..n
    std::vector<double> p;                 // p_0..p_n, p_i = P(W_i = 0)
};

/// lambda r int_u^s Phi_B(t)/(t (lambda-t)) dt, computed from the pole-free
/// decomposition; u and s must lie on the same side of both 0 and lambda.
double m3_exponent(const M3Kernel& k, double u, double s);

/// Geometric-epoch transform Psi_W(r,s) for s >= 0, s != lambda.
double m3_transient_lst(const M3Kernel& k, double s);

/// Stationary LST Phi_W(s) for s >= 0, s != lambda.
double m3_stationary_lst(const M3Kernel& k, double s);

/// Atom P(W = 0) of the stationary law; for exponential B the incomplete-beta
/// closed form is computed as well and must agree to 1e-8.
double m3_p_infinity(const M3Kernel& k);

/// E W = 2 (E B - (1 - p_inf) / lambda).
double m3_mean(const M3Kernel& k);

/// Moment recursion for B ~ exp(mu): omega_1..omega_j.
MomentSeq m3_moments_expB(double lambda, double mu, int j);

/// n steps of the transform recursion on the given s-grid, spline-backed.
M3Iteration m3_iterate_transient(const M3Kernel& k, int n, const std::vector<double>& s_grid);

/// Default grid for the iteration: Chebyshev-spaced points near 0.
std::vector<double> m3_default_grid(const M3Kernel& k, int n = 257);

/// Transform for V = U^(1/alpha): the same solution route with r -> r alpha;
/// rejects r alpha >= 1.
double m3_alpha_transient(const M3Kernel& k, double alpha, double s);

}  // namespace arproc
