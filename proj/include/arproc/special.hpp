#pragma once

namespace arproc {

/// Non-regularized incomplete beta function
///   B(x,a,b) = int_0^x u^(a-1) (1-u)^(b-1) du,  0 <= x <= 1, a,b > 0,
/// evaluated via the continued-fraction expansion of the regularized
/// function (modified Lentz) to ~1e-14 relative accuracy.
/// Throws DomainError outside the stated domain.
double incomplete_beta(double x, double a, double b);

/// Complete beta function B(a,b).
double beta_function(double a, double b);

}  // namespace arproc
