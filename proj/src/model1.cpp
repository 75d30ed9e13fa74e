#include "arproc/model1.hpp"

#include <cmath>
#include <functional>

#include "arproc/errors.hpp"
#include "arproc/stability.hpp"

namespace arproc {

namespace {

constexpr double kConditionLimit = 1e10;

// Everything the boundary solve needs, abstracted so the ill-conditioning
// fallback can rescale the s-axis without touching the model objects.
struct BoundaryInputs {
    std::vector<Complex> poles;                  // s_1..s_l of Phi_B
    std::function<Complex(Complex)> num_b;       // N_B(s)
    std::function<Complex(Complex)> phi_a_neg;   // Phi_A(-s)
    const MultiplierSpec* v = nullptr;
    double w = 0.0;
};

Complex denom_at(const std::vector<Complex>& poles, Complex s) {
    Complex d = 1.0;
    for (Complex p : poles) d *= (s - p);
    return d;
}

// One boundary equation set: r in (0,1) transient, r = 1 the stationary
// limit system (the initial-state terms vanish there).
std::pair<std::vector<Complex>, LinSolveReport> solve_boundary(const BoundaryInputs& in, double r,
                                                               const QuadRule& rule) {
    const int l = int(in.poles.size());
    const Complex d0 = denom_at(in.poles, 0.0);
    const Complex a0 = (r < 1.0 ? r / (1.0 - r) : 1.0) * d0;

    CMatrix M(l);
    std::vector<Complex> rhs(static_cast<size_t>(l));
    for (int j = 0; j < l; ++j) {
        const Complex sj = in.poles[size_t(j)];
        const Complex Rj = r * in.num_b(sj) * in.phi_a_neg(sj);
        std::vector<Complex> I(size_t(l) + 1);
        for (int k = 0; k <= l; ++k)
            I[size_t(k)] = in.v->expect(
                [&](double y) { return std::pow(Complex(y), k) / denom_at(in.poles, sj * y); },
                rule);
        Complex b = -a0 * (1.0 - Rj * I[0]);
        if (r < 1.0) {
            // E exp(-sj w V); decays on the negative V support since Re sj < 0.
            Complex phi_v = in.v->expect(
                [&](double y) { return std::exp(-sj * (y * in.w)); }, rule);
            b += Rj * phi_v;
        }
        rhs[size_t(j)] = b;
        Complex sk = sj;
        for (int k = 1; k <= l; ++k, sk *= sj) M(j, k - 1) = sk * (1.0 - Rj * I[size_t(k)]);
    }
    auto report = solve_linear(M, rhs);
    std::vector<Complex> a(size_t(l) + 1);
    a[0] = a0;
    for (int k = 1; k <= l; ++k) a[size_t(k)] = report.solution[size_t(k) - 1];
    return {std::move(a), std::move(report)};
}

std::pair<std::vector<Complex>, LinSolveReport> solve_boundary_guarded(const BoundaryInputs& in,
                                                                       double r,
                                                                       const QuadRule& rule) {
    auto first = solve_boundary(in, r, rule);
    if (first.second.condition_estimate <= kConditionLimit) return first;

    // Rescale the s-axis by the geometric mean pole magnitude and map the
    // coefficients back: a_k = ahat_k * sigma^(l-k).
    const int l = int(in.poles.size());
    double logsum = 0.0;
    for (Complex p : in.poles) logsum += std::log(std::abs(p));
    const double sigma = std::exp(logsum / double(l));
    BoundaryInputs scaled;
    scaled.poles.reserve(in.poles.size());
    for (Complex p : in.poles) scaled.poles.push_back(p / sigma);
    const double fac = std::pow(sigma, -l);
    scaled.num_b = [&in, sigma, fac](Complex s) { return in.num_b(sigma * s) * fac; };
    scaled.phi_a_neg = [&in, sigma](Complex s) { return in.phi_a_neg(sigma * s); };
    scaled.v = in.v;
    scaled.w = in.w * sigma;
    auto second = solve_boundary(scaled, r, rule);
    for (int k = 0; k <= l; ++k) second.first[size_t(k)] *= std::pow(sigma, l - k);
    return second;
}

struct Prepared {
    DistSpec b;
    RationalLST lst;
};

Prepared prepare_b(const ModelSpec& spec) {
    bool perturbed = false;
    DistSpec b = spec.B.with_distinct_poles(1e-6, &perturbed);
    return {b, b.lst()};
}

void check_realness(const ModelSpec& spec, double r, const CoeffVector& cv,
                    const RationalLST& lst) {
    for (double s : {0.5, 1.0, 2.0}) {
        Complex acc = r < 1.0 ? std::exp(Complex(-s * spec.w0)) : Complex(0.0);
        Complex sk = 1.0, num = 0.0;
        for (Complex a : cv.coeffs) {
            num += a * sk;
            sk *= s;
        }
        acc += num / lst.denom_at(s);
        if (std::fabs(acc.imag()) > 1e-8)
            throw DomainError("m1: coefficient solve lost conjugate symmetry");
    }
}

Complex eval_numerator(const CoeffVector& cv, Complex s) {
    Complex num = 0.0, sk = 1.0;
    for (Complex a : cv.coeffs) {
        num += a * sk;
        sk *= s;
    }
    return num;
}

}  // namespace

CoeffVector m1_transient_coeffs(const ModelSpec& spec, double r, const QuadRule& rule) {
    spec.validate();
    if (!(r > 0.0 && r < 1.0)) throw DomainError("m1_transient_coeffs: need r in (0,1)");
    auto prep = prepare_b(spec);
    BoundaryInputs in{prep.lst.poles,
                      [&](Complex s) { return prep.lst.numerator(s); },
                      [&](Complex s) { return spec.A.lst_eval(-s); },
                      &spec.V, spec.w0};
    auto [a, report] = solve_boundary_guarded(in, r, rule);
    CoeffVector cv{r, std::move(a), std::move(report)};
    check_realness(spec, r, cv, prep.lst);
    return cv;
}

Complex m1_transient_lst(const ModelSpec& spec, double, Complex s, const CoeffVector& coeffs) {
    auto prep = prepare_b(spec);
    Complex d = prep.lst.denom_at(s);
    for (Complex p : prep.lst.poles)
        if (std::abs(s - p) < 1e-12 * (1.0 + std::abs(p))) throw PoleHit("m1_transient_lst: s hits a pole of Phi_B");
    return std::exp(-s * spec.w0) + eval_numerator(coeffs, s) / d;
}

Complex m1_transient_minus(const ModelSpec& spec, double r, Complex s, const CoeffVector& coeffs,
                           const QuadRule& rule) {
    auto prep = prepare_b(spec);
    for (Complex p : prep.lst.poles)
        if (std::abs(s - p) < 1e-12 * (1.0 + std::abs(p)))
            throw PoleHit("m1_transient_minus: s hits a pole of Phi_B");
    Complex term = eval_numerator(coeffs, s) / prep.lst.denom_at(s);
    Complex vint = spec.V.expect(
        [&](double y) { return m1_transient_lst(spec, r, s * y, coeffs); }, rule);
    return 1.0 / (1.0 - r) - term / r + spec.y_lst(s) * vint;
}

StationaryLaw m1_stationary(const ModelSpec& spec, const QuadRule& rule) {
    spec.validate();
    auto verdict = classify(spec, rule);
    if (verdict.kind != StabilityVerdictKind::ProperUniqueLimit)
        throw StabilityError("m1_stationary: no proper limiting distribution certified");
    auto prep = prepare_b(spec);
    BoundaryInputs in{prep.lst.poles,
                      [&](Complex s) { return prep.lst.numerator(s); },
                      [&](Complex s) { return spec.A.lst_eval(-s); },
                      &spec.V, spec.w0};
    auto [a, report] = solve_boundary_guarded(in, 1.0, rule);
    StationaryLaw out;
    out.coeffs = CoeffVector{1.0, std::move(a), std::move(report)};
    check_realness(spec, 1.0, out.coeffs, prep.lst);
    const int l = int(prep.lst.poles.size());
    out.atom = out.coeffs.coeffs[size_t(l)].real();
    // E W = -Phi_W'(0) with Phi_W = num/D_B and num(0) = D_B(0) = a_0.
    Poly d = Poly::from_roots(prep.lst.poles);
    double dp0 = d.derivative()(0.0).real();
    double a0 = out.coeffs.coeffs[0].real();
    double a1 = l >= 1 ? out.coeffs.coeffs[1].real() : 0.0;
    out.mean = (dp0 - a1) / a0;
    return out;
}

Complex m1_stationary_lst(const ModelSpec& spec, Complex s, const CoeffVector& coeffs) {
    auto prep = prepare_b(spec);
    return eval_numerator(coeffs, s) / prep.lst.denom_at(s);
}

}  // namespace arproc
