#include "arproc/stability.hpp"

#include <cmath>

#include "arproc/errors.hpp"

namespace arproc {

namespace {

struct Support {
    double lo, hi;
};

Support support_of(const DistSpec& d) {
    switch (d.kind()) {
        case DistKind::Deterministic:
            return {d.value(), d.value()};
        case DistKind::Uniform:
            return {d.lo(), d.hi()};
        default:
            return {0.0, kInf};
    }
}

// Y = B - A >= 0 a.s. iff the essential infimum of B dominates the
// essential supremum of A.
bool y_nonnegative(const DistSpec& A, const DistSpec& B) {
    return support_of(B).lo >= support_of(A).hi;
}

double wilson_lower(long successes, long n, double z) {
    double phat = double(successes) / double(n);
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double centre = phat + z2 / (2.0 * n);
    double spread = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * double(n) * n));
    return (centre - spread) / denom;
}

}  // namespace

double prob_b_le_a(const DistSpec& A, const DistSpec& B, const QuadRule& rule) {
    // Exponential A: memoryless shortcut P(B <= A) = Phi_B(rate).
    if (A.kind() == DistKind::Exponential)
        return B.lst_eval(Complex(A.rates()[0])).real();
    return A.integrate_against([&](double a) { return Complex(B.cdf(a), 0.0); }, rule).real();
}

double e_log_abs_v(const MultiplierSpec& v, const QuadRule& rule) {
    if (v.prob_zero() > 0.0) throw DomainError("e_log_abs_v: requires P(V=0)=0");
    return v.e_log_abs(rule);
}

StabilityVerdict classify(const ModelSpec& spec, const QuadRule& rule, long mc_budget,
                          std::uint64_t seed) {
    // No structural validation here: the classification criteria only need
    // the laws of V, A, B, not the rational-transform conditions the
    // analytic solvers impose.
    StabilityVerdict out;

    const double pv_neg = spec.V.prob_negative();
    const double pv_zero = spec.V.prob_zero();
    const double e_abs = spec.V.e_abs(rule);
    const double e_log = spec.V.e_log_abs(rule);
    out.diagnostics["P(V<0)"] = pv_neg;
    out.diagnostics["P(V=0)"] = pv_zero;
    out.diagnostics["E|V|"] = e_abs;
    out.diagnostics["ElogAbsV"] = e_log;

    double p_y_le_0;
    bool p_y_exact = true;
    try {
        p_y_le_0 = prob_b_le_a(spec.A, spec.B, rule);
    } catch (const Error&) {
        p_y_exact = false;
        // Monte Carlo fallback with a 99% Wilson lower bound.
        RngStream rng(seed, 0);
        long hits = 0;
        for (long i = 0; i < mc_budget; ++i)
            if (spec.B.sample(rng) <= spec.A.sample(rng)) ++hits;
        double lb = wilson_lower(hits, mc_budget, 2.5758);
        out.diagnostics["P(Y<=0)_mc"] = double(hits) / double(mc_budget);
        out.diagnostics["P(Y<=0)_wilson_lb"] = lb;
        if (hits > 0 && lb > 0.0) {
            p_y_le_0 = double(hits) / double(mc_budget);
        } else if (hits == 0 && support_of(spec.B).lo > support_of(spec.A).hi) {
            p_y_le_0 = 0.0;
        } else {
            throw Inconclusive("classify: P(Y<=0) could not be separated from zero");
        }
    }
    out.diagnostics["P(Y<=0)"] = p_y_le_0;
    out.diagnostics["P(Y<=0)_exact"] = p_y_exact ? 1.0 : 0.0;

    if (pv_neg > 0.0 && p_y_le_0 > 0.0) {
        out.kind = StabilityVerdictKind::ProperUniqueLimit;
        out.which = StabilityCase::C1;
        out.unique = true;
        return out;
    }
    if (spec.V.nonnegative() && pv_zero > 0.0) {
        out.kind = StabilityVerdictKind::ProperUniqueLimit;
        out.which = StabilityCase::C2;
        out.unique = true;
        return out;
    }
    if ((spec.V.strictly_positive() && e_log < 0.0) || e_abs < 1.0) {
        out.kind = StabilityVerdictKind::ProperUniqueLimit;
        out.which = StabilityCase::LogMoment;
        out.unique = true;
        return out;
    }
    if (pv_neg + pv_zero > 0.0 && y_nonnegative(spec.A, spec.B)) {
        out.kind = StabilityVerdictKind::StationaryExists;
        out.convergence_warning = true;  // alternation may prevent weak convergence
        return out;
    }
    if (spec.V.strictly_positive() && std::fabs(e_log) < 1e-12 && spec.w0 == 0.0) {
        out.kind = StabilityVerdictKind::PossiblyImproper;
        return out;
    }
    out.kind = StabilityVerdictKind::Unsupported;
    return out;
}

}  // namespace arproc
