#pragma once

#include "arproc/model1.hpp"

namespace arproc {

/// Right-half-plane zeros delta_1(r)..delta_m(r) of D_Y(s) - r p N_Y(s),
/// together with the full root set of that polynomial.
struct DeltaRoots {
    double r = 0.0;
    std::vector<Complex> roots;
    std::vector<Complex> all_roots;
};

/// Truncation policy and report for the geometric series representations.
struct SeriesControl {
    int max_terms = 400;
    double tail_tol = 1e-12;
    int achieved_terms = 0;
    double tail_bound = 0.0;
};

DeltaRoots m2_find_deltas(const ModelSpec& spec, double r);

/// Case a = 1: coefficients a_0(r)..a_{m+l}(r) from the closed-form a_0 and
/// the stacked boundary systems at the delta roots and the poles of Phi_B.
CoeffVector m2_transient_coeffs_a1(const ModelSpec& spec, double r, const QuadRule& rule = {});

/// Case a = 1 transform; near a delta root the deflated (derivative-ratio)
/// form is used, the numerator vanishing there by construction.
Complex m2_transient_lst_a1(const ModelSpec& spec, double r, Complex s, const CoeffVector& coeffs);

/// Case 0 < a < 1: coefficients via the series-based boundary systems.
CoeffVector m2_transient_coeffs_alt(const ModelSpec& spec, double r, const QuadRule& rule,
                                    SeriesControl& ctl);

/// Case 0 < a < 1 transform via the iterated-kernel series.
Complex m2_transient_lst_alt(const ModelSpec& spec, double r, Complex s, const CoeffVector& coeffs,
                             SeriesControl& ctl);

struct M2Stationary {
    CoeffVector coeffs;  // r = 1
    double atom = 0.0;   // P(W = 0)
};

/// Stationary coefficients via the r -> 1 limit systems, cross-checked by
/// extrapolating (1-r) a_k(r); disagreement raises ExtrapolationMismatch.
M2Stationary m2_stationary(const ModelSpec& spec, const QuadRule& rule = {});

/// Stationary LST at s (dispatches on a = 1 versus a < 1).
Complex m2_stationary_lst(const ModelSpec& spec, Complex s, const CoeffVector& coeffs,
                          SeriesControl& ctl);

}  // namespace arproc
