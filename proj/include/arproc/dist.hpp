#pragma once

#include <functional>
#include <vector>

#include "arproc/poly.hpp"
#include "arproc/quad.hpp"
#include "arproc/rng.hpp"

namespace arproc {

/// Rational LST  Phi_X(s) = N_X(s) / prod_j (s - s_j).
/// Poles must lie strictly in the left half-plane and come in conjugate
/// pairs, so the denominator has real coefficients and Phi_X(0) = 1.
struct RationalLST {
    Poly numerator;
    std::vector<Complex> poles;

    Poly denominator() const;
    Complex denom_at(Complex s) const;
    Complex eval(Complex s) const;

    /// Checks pole half-plane, conjugate closure, normalization Phi(0)=1,
    /// degree bound and no shared zeros. Throws DomainError on violation.
    void validate() const;
};

enum class DistKind {
    Exponential,
    Erlang,
    HyperExponential,
    CoxianChain,
    Deterministic,
    Uniform,
    RawRational,
};

/// Constructive distribution of a non-negative random variable. The same
/// object feeds both the analytic solvers (exact rational LST) and the
/// simulator (exact sampling), so they provably describe one law.
/// RawRational is the analytic-only escape hatch (simulable() == false).
class DistSpec {
  public:
    static DistSpec Exponential(double rate);
    static DistSpec Erlang(int shape, double rate);
    static DistSpec HyperExponential(std::vector<double> weights, std::vector<double> rates);
    static DistSpec CoxianChain(std::vector<double> rates, std::vector<double> exit_probs);
    static DistSpec Deterministic(double value);
    static DistSpec Uniform(double lo, double hi);
    static DistSpec RawRational(Poly numerator, std::vector<Complex> poles);

    DistKind kind() const { return kind_; }
    bool rational() const;
    bool simulable() const { return kind_ != DistKind::RawRational; }

    /// Exact symbolic LST construction; throws NotRational for
    /// Deterministic/Uniform kinds.
    RationalLST lst() const;

    /// Phi_X(s) = E exp(-sX); closed form for every kind.
    Complex lst_eval(Complex s) const;
    /// d/ds Phi_X(s) via complex-step differentiation (machine accurate).
    double lst_deriv(double s) const;

    double mean() const;
    double cdf(double x) const;
    double sample(RngStream& rng) const;

    /// int g(x) dF(x) over [0,inf); atoms handled exactly, continuous parts
    /// by quadrature against the closed-form density.
    Complex integrate_against(const std::function<Complex(double)>& g, const QuadRule& rule) const;

    /// Copy whose rational LST has pairwise distinct poles. Erlang rates are
    /// split into mu, mu(1+eps), ... (becoming a hypoexponential chain);
    /// *perturbed is set when anything changed.
    DistSpec with_distinct_poles(double eps, bool* perturbed) const;

    // Parameter accessors (valid per kind).
    const std::vector<double>& rates() const { return rates_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& exit_probs() const { return weights_; }
    int shape() const { return shape_; }
    double value() const { return value_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

  private:
    DistSpec() = default;

    DistKind kind_ = DistKind::Deterministic;
    std::vector<double> rates_;
    std::vector<double> weights_;  // mixture weights or Coxian exit probabilities
    int shape_ = 0;
    double value_ = 0.0;
    double lo_ = 0.0, hi_ = 0.0;
    Poly raw_num_;
    std::vector<Complex> raw_poles_;
};

}  // namespace arproc
