#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "arproc/poly.hpp"

namespace arproc {

struct QuadRule {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
    std::vector<double> singularity_hints;  // integrable singularities inside the range
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Adaptive Gauss-Kronrod (7/15) with globally greedy refinement.
/// Either endpoint may be infinite; semi-infinite ranges use t = lo + u/(1-u),
/// doubly infinite ranges use t = u/(1-u^2). Integrable endpoint or hinted
/// interior singularities are fine (the rule never samples subinterval ends).
/// Throws ToleranceNotMet (carrying the best estimate) on failure.
Complex integrate(const std::function<Complex(double)>& f, double lo, double hi,
                  const QuadRule& rule = {});

double integrate_real(const std::function<double(double)>& f, double lo, double hi,
                      const QuadRule& rule = {});

/// Integral with a known algebraic endpoint singularity:
///   at_lower: int_a^b (x-a)^(gamma-1) g(x) dx
///   else:     int_a^b (b-x)^(gamma-1) g(x) dx
/// for gamma in (0,1], g smooth; computed exactly via the substitution
/// w = (x-endpoint)^gamma so the transformed integrand is regular.
double integrate_power_endpoint(const std::function<double(double)>& g, double a, double b,
                                double gamma, bool at_lower, const QuadRule& rule = {});

}  // namespace arproc
