#include "arproc/multiplier.hpp"

#include <cmath>

#include "arproc/errors.hpp"

namespace arproc {

MultiplierSpec MultiplierSpec::NegativeAtoms(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw DomainError("NegativeAtoms: at least one atom required");
    double total = 0.0;
    for (auto& [y, p] : atoms) {
        if (!(y < 0.0)) throw DomainError("NegativeAtoms: atoms must be strictly negative");
        if (!(p >= 0.0)) throw DomainError("NegativeAtoms: probabilities must be non-negative");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw DomainError("NegativeAtoms: probabilities must sum to 1");
    MultiplierSpec m;
    m.variant_ = Variant::NegativeAtoms;
    m.atoms_ = std::move(atoms);
    return m;
}

MultiplierSpec MultiplierSpec::NegativeScaledDist(double c, DistSpec base) {
    if (!(c > 0.0)) throw DomainError("NegativeScaledDist: scale must be positive");
    if (!base.simulable())
        throw DomainError("NegativeScaledDist: base must be a constructive spec");
    if (base.kind() == DistKind::Deterministic && base.value() == 0.0)
        throw DomainError("NegativeScaledDist: V must be strictly negative");
    MultiplierSpec m;
    m.variant_ = Variant::NegativeScaledDist;
    m.c_ = c;
    m.base_ = std::move(base);
    return m;
}

MultiplierSpec MultiplierSpec::MixedAtom(double a, double p, MultiplierSpec negative_part) {
    if (!(a > 0.0)) throw DomainError("MixedAtom: positive atom must satisfy a > 0");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("MixedAtom: p must lie in (0,1)");
    if (!negative_part.strictly_negative())
        throw DomainError("MixedAtom: negative part must be a strictly negative variant");
    MultiplierSpec m;
    m.variant_ = Variant::MixedAtom;
    m.a_ = a;
    m.p_ = p;
    m.neg_ = std::make_shared<MultiplierSpec>(std::move(negative_part));
    return m;
}

MultiplierSpec MultiplierSpec::Uniform01() {
    MultiplierSpec m;
    m.variant_ = Variant::Uniform01;
    return m;
}

MultiplierSpec MultiplierSpec::PowerUniform(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("PowerUniform: alpha must be positive");
    MultiplierSpec m;
    m.variant_ = Variant::PowerUniform;
    m.alpha_ = alpha;
    return m;
}

bool MultiplierSpec::strictly_negative() const {
    return variant_ == Variant::NegativeAtoms || variant_ == Variant::NegativeScaledDist;
}

double MultiplierSpec::prob_negative() const {
    switch (variant_) {
        case Variant::NegativeAtoms:
        case Variant::NegativeScaledDist:
            return 1.0;
        case Variant::MixedAtom:
            return 1.0 - p_;
        default:
            return 0.0;
    }
}

double MultiplierSpec::prob_zero() const {
    // Uniform laws are continuous; scaled distributions exclude a zero value.
    return 0.0;
}

bool MultiplierSpec::nonnegative() const {
    return variant_ == Variant::Uniform01 || variant_ == Variant::PowerUniform;
}

bool MultiplierSpec::strictly_positive() const {
    // Uniform(0,1) puts zero mass at 0, so V > 0 a.s.
    return nonnegative();
}

const MultiplierSpec& MultiplierSpec::negative_part() const {
    if (variant_ == Variant::MixedAtom) return *neg_;
    if (strictly_negative()) return *this;
    throw DomainError("negative_part: law has no negative component");
}

double MultiplierSpec::e_abs(const QuadRule& rule) const {
    switch (variant_) {
        case Variant::NegativeAtoms: {
            double m = 0.0;
            for (auto& [y, p] : atoms_) m += p * std::fabs(y);
            return m;
        }
        case Variant::NegativeScaledDist:
            return c_ * base_.mean();
        case Variant::MixedAtom:
            return p_ * a_ + (1.0 - p_) * neg_->e_abs(rule);
        case Variant::Uniform01:
            return 0.5;
        case Variant::PowerUniform:
            return alpha_ / (alpha_ + 1.0);
    }
    throw DomainError("e_abs: unknown variant");
}

double MultiplierSpec::e_log_abs(const QuadRule& rule) const {
    switch (variant_) {
        case Variant::NegativeAtoms: {
            double m = 0.0;
            for (auto& [y, p] : atoms_) m += p * std::log(std::fabs(y));
            return m;
        }
        case Variant::NegativeScaledDist:
            return std::log(c_) +
                   base_
                       .integrate_against(
                           [](double x) { return Complex(std::log(x), 0.0); }, rule)
                       .real();
        case Variant::MixedAtom:
            return p_ * std::log(a_) + (1.0 - p_) * neg_->e_log_abs(rule);
        case Variant::Uniform01:
            return -1.0;  // int_0^1 log x dx
        case Variant::PowerUniform:
            return -1.0 / alpha_;
    }
    throw DomainError("e_log_abs: unknown variant");
}

Complex MultiplierSpec::integrate_negative(const std::function<Complex(double)>& f,
                                           const QuadRule& rule) const {
    switch (variant_) {
        case Variant::NegativeAtoms: {
            Complex acc = 0.0;
            for (auto& [y, p] : atoms_) acc += p * f(y);
            return acc;
        }
        case Variant::NegativeScaledDist:
            return base_.integrate_against([&](double x) { return f(-c_ * x); }, rule);
        case Variant::MixedAtom:
            return neg_->integrate_negative(f, rule);
        default:
            throw DomainError("integrate_v: law has no negative part");
    }
}

Complex MultiplierSpec::expect(const std::function<Complex(double)>& f,
                               const QuadRule& rule) const {
    switch (variant_) {
        case Variant::NegativeAtoms:
        case Variant::NegativeScaledDist:
            return integrate_negative(f, rule);
        case Variant::MixedAtom:
            return p_ * f(a_) + (1.0 - p_) * neg_->integrate_negative(f, rule);
        case Variant::Uniform01:
            return integrate([&](double y) { return f(y); }, 0.0, 1.0, rule);
        case Variant::PowerUniform:
            // E f(U^(1/alpha)) = int_0^1 f(v) alpha v^(alpha-1) dv
            return integrate(
                [&](double v) { return f(v) * alpha_ * std::pow(v, alpha_ - 1.0); }, 0.0, 1.0,
                rule);
    }
    throw DomainError("expect: unknown variant");
}

double MultiplierSpec::sample(RngStream& rng) const {
    auto unit = [&] { return rng.uniform(); };
    switch (variant_) {
        case Variant::NegativeAtoms: {
            double u = unit(), acc = 0.0;
            for (auto& [y, p] : atoms_) {
                acc += p;
                if (u <= acc) return y;
            }
            return atoms_.back().first;
        }
        case Variant::NegativeScaledDist:
            return -c_ * base_.sample(rng);
        case Variant::MixedAtom:
            return unit() <= p_ ? a_ : neg_->sample(rng);
        case Variant::Uniform01:
            return unit();
        case Variant::PowerUniform:
            return std::pow(unit(), 1.0 / alpha_);
    }
    throw DomainError("sample: unknown variant");
}

void ModelSpec::validate() const {
    switch (model) {
        case ModelKind::I:
            if (!V.strictly_negative())
                throw SchemaError("Model I requires a strictly negative multiplier", "V");
            if (!B.rational())
                throw SchemaError("Model I requires B with a rational LST", "B");
            break;
        case ModelKind::II:
            if (V.variant() != MultiplierSpec::Variant::MixedAtom)
                throw SchemaError("Model II requires the mixed-atom multiplier", "V");
            if (!A.rational() || !B.rational())
                throw SchemaError("Model II requires rational LSTs for both A and B", "A/B");
            break;
        case ModelKind::III:
            if (V.variant() != MultiplierSpec::Variant::Uniform01 &&
                V.variant() != MultiplierSpec::Variant::PowerUniform)
                throw SchemaError("Model III requires a uniform-type multiplier", "V");
            if (A.kind() != DistKind::Exponential)
                throw SchemaError("Model III requires exponential A", "A");
            break;
    }
    if (w0 < 0.0) throw SchemaError("initial state w0 must be non-negative", "w0");
}

Complex ModelSpec::y_lst(Complex s) const {
    if (B.rational()) {
        for (Complex p : B.lst().poles)
            if (std::abs(s - p) < 1e-12 * (1.0 + std::abs(p)))
                throw PoleHit("y_transform: s hits a pole of Phi_B");
    }
    if (A.rational()) {
        for (Complex p : A.lst().poles)
            if (std::abs(s + p) < 1e-12 * (1.0 + std::abs(p)))
                throw PoleHit("y_transform: s hits a pole of Phi_A(-s)");
    }
    return B.lst_eval(s) * A.lst_eval(-s);
}

Poly reflect_argument(const Poly& p) {
    std::vector<Complex> c = p.coeffs();
    for (size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
    return Poly(std::move(c));
}

Poly ModelSpec::y_num() const { return B.lst().numerator * reflect_argument(A.lst().numerator); }

Poly ModelSpec::y_den() const {
    return B.lst().denominator() * reflect_argument(A.lst().denominator());
}

}  // namespace arproc
