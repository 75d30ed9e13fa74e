#pragma once

#include "arproc/linalg.hpp"
#include "arproc/multiplier.hpp"

namespace arproc {

/// Solved boundary coefficients a_0..a_n of a transform numerator polynomial.
/// r in (0,1) carries the transient geometric-epoch solution; r = 1 encodes
/// the stationary limits a_k = lim_{r->1} (1-r) a_k(r).
struct CoeffVector {
    double r = 0.0;
    std::vector<Complex> coeffs;
    LinSolveReport solve_report;
};

struct StationaryLaw {
    CoeffVector coeffs;
    double atom = 0.0;  // P(W = 0)
    double mean = 0.0;
};

/// Transient coefficients a_0(r)..a_l(r): a_0 in closed form, the rest from
/// the l x l boundary linear system. Repeated poles of B are split by the
/// rate-perturbation copy before solving; an ill-conditioned system is
/// re-solved on a rescaled s-axis.
CoeffVector m1_transient_coeffs(const ModelSpec& spec, double r, const QuadRule& rule = {});

/// Psi_W(r,s) = e^{-sw} + sum_k a_k(r) s^k / D_B(s), Re s >= 0.
Complex m1_transient_lst(const ModelSpec& spec, double r, Complex s, const CoeffVector& coeffs);

/// Psi_Wbar(r,s) for the reflected-away negative parts, Re s <= 0.
Complex m1_transient_minus(const ModelSpec& spec, double r, Complex s, const CoeffVector& coeffs,
                           const QuadRule& rule = {});

/// Stationary coefficients, atom P(W=0) = a_l and mean; requires a proper
/// limit (throws StabilityError otherwise).
StationaryLaw m1_stationary(const ModelSpec& spec, const QuadRule& rule = {});

/// Phi_W(s) from stationary coefficients.
Complex m1_stationary_lst(const ModelSpec& spec, Complex s, const CoeffVector& coeffs);

}  // namespace arproc
