#pragma once

#include <vector>

#include "arproc/poly.hpp"

namespace arproc {

/// All complex roots of p, with multiplicity, via Aberth-Ehrlich iteration
/// plus Newton polishing. For real-coefficient input the returned set is
/// closed under conjugation (paired roots are symmetrized exactly).
///
/// Throws NonConvergence if the iteration budget is exhausted before every
/// residual satisfies |p(root)| <= 1e-8 * (1 + max|coeff|).
std::vector<Complex> poly_roots(const Poly& p, int max_iter = 400);

}  // namespace arproc
