#pragma once

#include <memory>
#include <utility>

#include "arproc/dist.hpp"

namespace arproc {

/// Law of the multiplier V in W_{i+1} = [V W_i + B_i - A_i]^+.
class MultiplierSpec {
  public:
    enum class Variant {
        NegativeAtoms,       // finitely many atoms y_k < 0
        NegativeScaledDist,  // V = -c X for a constructive X, c > 0
        MixedAtom,           // V = a > 0 w.p. p, otherwise a negative-variant law
        Uniform01,           // P(V < x) = x on [0,1]
        PowerUniform,        // V = U^(1/alpha)
    };

    static MultiplierSpec NegativeAtoms(std::vector<std::pair<double, double>> atoms);
    static MultiplierSpec NegativeScaledDist(double c, DistSpec base);
    static MultiplierSpec MixedAtom(double a, double p, MultiplierSpec negative_part);
    static MultiplierSpec Uniform01();
    static MultiplierSpec PowerUniform(double alpha);

    Variant variant() const { return variant_; }
    bool strictly_negative() const;
    double prob_negative() const;
    double prob_zero() const;
    bool nonnegative() const;
    bool strictly_positive() const;

    double e_abs(const QuadRule& rule) const;
    double e_log_abs(const QuadRule& rule) const;

    /// int_{y<0} f(y) P(Vbar in dy) against the *conditional* negative part
    /// Vbar = (V | V < 0); a probability measure. For strictly negative
    /// variants this coincides with the unconditional law.
    Complex integrate_negative(const std::function<Complex(double)>& f,
                               const QuadRule& rule) const;

    /// E f(V) over the full law (used for Phi_V evaluations in Model I).
    Complex expect(const std::function<Complex(double)>& f, const QuadRule& rule) const;

    double sample(RngStream& rng) const;

    // MixedAtom accessors.
    double pos_atom_value() const { return a_; }
    double pos_atom_prob() const { return p_; }
    const MultiplierSpec& negative_part() const;

    const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
    double scale() const { return c_; }
    const DistSpec& base() const { return base_; }
    double alpha() const { return alpha_; }

  private:
    MultiplierSpec() : base_(DistSpec::Deterministic(0.0)) {}

    Variant variant_ = Variant::Uniform01;
    std::vector<std::pair<double, double>> atoms_;  // (y < 0, prob)
    double c_ = 0.0;
    DistSpec base_;
    double a_ = 0.0, p_ = 0.0;
    std::shared_ptr<MultiplierSpec> neg_;
    double alpha_ = 1.0;
};

enum class ModelKind { I, II, III };

/// One fully-specified instance of the recursion.
struct ModelSpec {
    ModelKind model;
    MultiplierSpec V;
    DistSpec A;
    DistSpec B;
    double w0 = 0.0;

    /// Enforces the per-model structural constraints. Throws SchemaError.
    void validate() const;

    /// Phi_Y(s) = Phi_B(s) * Phi_A(-s); throws PoleHit at a pole of either factor.
    Complex y_lst(Complex s) const;

    /// N_Y, D_Y as polynomials (both factors must be rational):
    /// N_Y(s) = N_B(s) N_A(-s), D_Y(s) = D_B(s) D_A(-s).
    Poly y_num() const;
    Poly y_den() const;
};

/// Substitute -s into p: flips the sign of odd-degree coefficients.
Poly reflect_argument(const Poly& p);

}  // namespace arproc
