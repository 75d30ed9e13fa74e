#pragma once

#include <map>
#include <string>

#include "arproc/multiplier.hpp"

namespace arproc {

enum class StabilityCase {
    C1,         // P(V<0)>0 and P(Y<=0)>0
    C2,         // V >= 0 a.s. with an atom at 0
    C3,         // V > 0 a.s. with E log V < 0, certified from atoms
    LogMoment,  // E log|V| < 0 (or E|V| < 1) route
};

enum class StabilityVerdictKind {
    ProperUniqueLimit,
    StationaryExists,  // P(V<=0)>0, Y>=0 a.s.: stationary law exists, convergence may fail
    PossiblyImproper,
    Unsupported,
};

struct StabilityVerdict {
    StabilityVerdictKind kind = StabilityVerdictKind::Unsupported;
    StabilityCase which = StabilityCase::LogMoment;  // valid for ProperUniqueLimit
    bool unique = false;
    bool convergence_warning = false;  // periodic-alternation caveat
    std::map<std::string, double> diagnostics;
};

/// Classify the long-run behavior of the recursion.
/// P(Y<=0) is resolved analytically/by quadrature when the laws allow it and
/// by seeded Monte Carlo with a Wilson lower bound otherwise; "positive"
/// means the 99% lower bound exceeds zero. Throws Inconclusive when the
/// probability cannot be separated from zero either way.
StabilityVerdict classify(const ModelSpec& spec, const QuadRule& rule = {},
                          long mc_budget = 200000, std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

/// E log|V|; exact for atoms, closed form for the uniform variants,
/// quadrature otherwise. Requires P(V=0)=0.
double e_log_abs_v(const MultiplierSpec& v, const QuadRule& rule = {});

/// P(B <= A) for independent constructive A, B (atoms exact, continuous
/// parts by quadrature of int F_B dF_A).
double prob_b_le_a(const DistSpec& A, const DistSpec& B, const QuadRule& rule = {});

}  // namespace arproc
