#include "arproc/model2.hpp"

#include <cmath>

#include "arproc/errors.hpp"
#include "arproc/roots.hpp"
#include "arproc/stability.hpp"

namespace arproc {

namespace {

struct M2Prep {
    DistSpec A = DistSpec::Exponential(1.0), B = DistSpec::Exponential(1.0);
    RationalLST la, lb;
    Poly NY, DY, DYd;  // DYd = DY'
    std::vector<Complex> sj;  // poles of Phi_B
    std::vector<Complex> ti;  // poles of Phi_A
    double a = 0.0, p = 0.0;
};

M2Prep prepare(const ModelSpec& spec) {
    spec.validate();
    M2Prep prep;
    bool pert = false;
    prep.A = spec.A.with_distinct_poles(1e-6, &pert);
    prep.B = spec.B.with_distinct_poles(1e-6, &pert);
    prep.la = prep.A.lst();
    prep.lb = prep.B.lst();
    prep.sj = prep.lb.poles;
    prep.ti = prep.la.poles;
    prep.NY = prep.lb.numerator * reflect_argument(prep.la.numerator);
    prep.DY = prep.lb.denominator() * reflect_argument(prep.la.denominator());
    prep.DYd = prep.DY.derivative();
    prep.a = spec.V.pos_atom_value();
    prep.p = spec.V.pos_atom_prob();
    return prep;
}

std::vector<Complex> find_deltas_poly(const Poly& DY, const Poly& NY, int m, double rho,
                                      double r, std::vector<Complex>* all = nullptr) {
    Poly target = DY + Poly({Complex(-rho)}) * NY;
    auto roots = poly_roots(target);
    // Newton polish: the downstream boundary systems and the defining
    // equation 1 - rho Phi_Y(delta) = 0 are sensitive to root error near
    // the poles of Phi_Y.
    Poly dtarget = target.derivative();
    for (Complex& z : roots)
        for (int it = 0; it < 3; ++it) {
            Complex d = dtarget(z);
            if (std::abs(d) == 0.0) break;
            z -= target(z) / d;
        }
    std::vector<Complex> deltas;
    for (Complex z : roots)
        if (z.real() > 0.0) deltas.push_back(z);
    if (all) *all = roots;
    if (int(deltas.size()) != m)
        throw RootCountMismatch("m2: wrong number of right-half-plane roots", m,
                                int(deltas.size()));
    for (size_t i = 0; i < deltas.size(); ++i)
        for (size_t j = i + 1; j < deltas.size(); ++j)
            if (std::abs(deltas[i] - deltas[j]) < 1e-7 * (1.0 + std::abs(deltas[i])))
                throw PoleCollision("m2: confluent delta roots at r=" + std::to_string(r));
    return deltas;
}

std::vector<Complex> find_deltas_rho(const M2Prep& prep, double rho, double r,
                                     std::vector<Complex>* all = nullptr) {
    return find_deltas_poly(prep.DY, prep.NY, int(prep.ti.size()), rho, r, all);
}

// Does the (conditional) negative law of V put mass at or around y?
bool vbar_covers(const MultiplierSpec& v, double y, double tol) {
    const MultiplierSpec& neg =
        v.variant() == MultiplierSpec::Variant::MixedAtom ? v.negative_part() : v;
    switch (neg.variant()) {
        case MultiplierSpec::Variant::NegativeAtoms: {
            for (auto& [yk, pk] : neg.atoms())
                if (std::fabs(yk - y) < tol) return true;
            return false;
        }
        case MultiplierSpec::Variant::NegativeScaledDist: {
            const DistSpec& base = neg.base();
            double x = -y / neg.scale();
            if (base.kind() == DistKind::Deterministic) return std::fabs(x - base.value()) < tol;
            if (base.kind() == DistKind::Uniform)
                return x > base.lo() - tol && x < base.hi() + tol;
            return x > -tol;  // exponential-type support [0, inf)
        }
        default:
            return false;
    }
}

// Termwise representations place poles of the integrands on the negative
// V-ray; refuse when the law actually charges such a point.
void check_ray_pole(const MultiplierSpec& v, Complex pole, Complex factor, const char* what) {
    Complex ystar = pole / factor;
    if (std::fabs(ystar.imag()) > 1e-9 * (1.0 + std::abs(ystar))) return;
    double y = ystar.real();
    if (y >= 0.0) return;
    if (vbar_covers(v, y, 1e-9 * (1.0 + std::fabs(y))))
        throw PoleCollision(std::string("m2: integrand pole on the V-support (") + what + ")");
}

Complex poly_sum(const std::vector<Complex>& a, Complex s) {
    Complex acc = 0.0, sk = 1.0;
    for (Complex c : a) {
        acc += c * sk;
        sk *= s;
    }
    return acc;
}

Complex poly_sum_deriv(const std::vector<Complex>& a, Complex s) {
    Complex acc = 0.0, sk = 1.0;
    for (size_t k = 1; k < a.size(); ++k) {
        acc += double(k) * a[k] * sk;
        sk *= s;
    }
    return acc;
}

double closed_a0(const M2Prep& prep, double r) {
    double fac = r < 1.0 ? r / (1.0 - r) : 1.0;
    return fac * (1.0 - prep.p) * prep.DY(0.0).real();
}

void check_realness(const std::vector<Complex>& a, const M2Prep& prep, double rho, double w,
                    bool with_exp) {
    for (double s : {0.5, 1.0, 2.0}) {
        Complex num = with_exp ? prep.DY(Complex(s)) * std::exp(Complex(-s * w)) : Complex(0.0);
        num += poly_sum(a, s);
        Complex den = prep.DY(Complex(s)) - rho * prep.NY(Complex(s));
        if (std::fabs((num / den).imag()) > 1e-8)
            throw DomainError("m2: coefficient solve lost conjugate symmetry");
    }
}

// ---- case a = 1 -----------------------------------------------------------

CoeffVector coeffs_a1(const ModelSpec& spec, const M2Prep& prep, double r, const QuadRule& rule) {
    const double rho = (r < 1.0 ? r : 1.0) * prep.p;
    const int m = int(prep.ti.size()), l = int(prep.sj.size()), n = m + l;
    auto deltas = find_deltas_rho(prep, rho, r);
    const Complex a0 = closed_a0(prep, r);

    for (Complex sj : prep.sj)
        for (Complex d : deltas) check_ray_pole(spec.V, d, sj, "delta root");

    CMatrix M(n);
    std::vector<Complex> rhs(static_cast<size_t>(n));
    for (int i = 0; i < m; ++i) {
        Complex d = deltas[size_t(i)], dk = d;
        for (int k = 1; k <= n; ++k, dk *= d) M(i, k - 1) = dk;
        rhs[size_t(i)] = (r < 1.0 ? -std::exp(-d * spec.w0) * prep.DY(d) : Complex(0.0)) - a0;
    }
    for (int j = 0; j < l; ++j) {
        Complex sj = prep.sj[size_t(j)];
        Complex ny = prep.NY(sj);
        if (std::abs(ny) < 1e-13 * (1.0 + prep.NY.max_abs_coeff()))
            throw SingularMatrix("m2: N_Y vanishes at a pole of Phi_B");
        auto c = [&](int k) {
            Complex direct = std::pow(sj, k) / (r * (1.0 - prep.p) * ny);
            Complex integral = spec.V.integrate_negative(
                [&](double y) {
                    Complex z = sj * y;
                    return std::pow(z, k) / (prep.DY(z) - rho * prep.NY(z));
                },
                rule);
            return direct - integral;
        };
        for (int k = 1; k <= n; ++k) M(m + j, k - 1) = c(k);
        Complex b = -a0 * c(0);
        if (r < 1.0)
            b += spec.V.integrate_negative(
                [&](double y) {
                    Complex z = sj * y;
                    return std::exp(-z * spec.w0) * prep.DY(z) / (prep.DY(z) - rho * prep.NY(z));
                },
                rule);
        rhs[size_t(m + j)] = b;
    }
    auto report = solve_linear(M, rhs);
    CoeffVector cv;
    cv.r = r;
    cv.coeffs.resize(size_t(n) + 1);
    cv.coeffs[0] = a0;
    for (int k = 1; k <= n; ++k) cv.coeffs[size_t(k)] = report.solution[size_t(k) - 1];
    cv.solve_report = std::move(report);
    check_realness(cv.coeffs, prep, rho, spec.w0, r < 1.0);
    return cv;
}

Complex lst_a1(const ModelSpec& spec, const M2Prep& prep, double r, Complex s,
               const CoeffVector& coeffs) {
    const double rho = (r < 1.0 ? r : 1.0) * prep.p;
    Complex num, numd;
    if (r < 1.0) {
        Complex e = std::exp(-s * spec.w0);
        num = prep.DY(s) * e + poly_sum(coeffs.coeffs, s);
        numd = (prep.DYd(s) - spec.w0 * prep.DY(s)) * e + poly_sum_deriv(coeffs.coeffs, s);
    } else {
        num = poly_sum(coeffs.coeffs, s);
        numd = poly_sum_deriv(coeffs.coeffs, s);
    }
    Complex den = prep.DY(s) - rho * prep.NY(s);
    auto deltas = find_deltas_rho(prep, rho, r);
    for (Complex d : deltas)
        if (std::abs(s - d) < 1e-6 * (1.0 + std::abs(d)))
            return numd / (prep.DYd(s) - rho * prep.NY.derivative()(s));
    return num / den;
}

// ---- case a < 1 -----------------------------------------------------------

// Geometric-tail truncation shared by every series here. term(h) must
// eventually decay like ratio^h; the reported bound is |last| ratio/(1-ratio).
struct SumOut {
    Complex value;
    int terms = 0;
    double tail = 0.0;
};

template <class TermFn>
SumOut tail_sum(TermFn term, double ratio, double tol, int max_terms, const char* what) {
    SumOut out;
    for (int h = 0; h < max_terms; ++h) {
        Complex t = term(h);
        out.value += t;
        out.terms = h + 1;
        out.tail = std::abs(t) * ratio / (1.0 - ratio);
        if (h >= 1 && out.tail <= tol) return out;
    }
    throw SeriesBudgetExceeded(std::string("m2: series budget exhausted in ") + what);
}

Complex phi_y(const M2Prep& prep, Complex z) {
    Complex d = prep.DY(z);
    if (std::abs(d) < 1e-13 * (1.0 + prep.DY.max_abs_coeff() * std::pow(std::abs(z) + 1.0,
                                                                        prep.DY.degree())))
        throw PoleHit("m2: Phi_Y evaluated at one of its poles");
    return prep.NY(z) / d;
}

CoeffVector coeffs_alt(const ModelSpec& spec, const M2Prep& prep, double r, const QuadRule& rule,
                       SeriesControl& ctl) {
    const double a = prep.a, w = spec.w0;
    const double rho = (r < 1.0 ? r : 1.0) * prep.p;
    const int m = int(prep.ti.size()), l = int(prep.sj.size()), n = m + l;
    const Complex a0 = closed_a0(prep, r);
    const double tol = ctl.tail_tol;

    int used = 0;
    double tail = 0.0;
    auto absorb = [&](const SumOut& s) {
        used = std::max(used, s.terms);
        tail = std::max(tail, s.tail);
        return s.value;
    };

    CMatrix M(n);
    std::vector<Complex> rhs(static_cast<size_t>(n));

    for (int i = 0; i < m; ++i) {
        const Complex t = prep.ti[size_t(i)];
        // Pole collisions of Phi_Y(-a^{j+1} t_i) with the poles of Phi_A.
        for (int j = 0; j < ctl.max_terms; ++j) {
            double aj = std::pow(a, j + 1);
            if (aj < 1e-14) break;
            for (Complex tt : prep.ti)
                if (std::abs(-aj * t - (-tt)) < 1e-9 * (1.0 + std::abs(tt)))
                    throw PoleCollision("m2: a^j t_i collides with a pole of Phi_A");
        }
        Complex nyt = prep.NY(-t);
        std::vector<Complex> S(size_t(n) + 1);
        for (int k = 0; k <= n; ++k) {
            Complex prod = 1.0;
            S[size_t(k)] = absorb(tail_sum(
                [&, k](int h) mutable {
                    if (h > 0) prod *= phi_y(prep, -std::pow(a, h) * t);
                    return std::pow(a, double(k) * (h + 1)) * std::pow(rho, h) * prod /
                           prep.DY(-std::pow(a, h + 1) * t);
                },
                rho, tol, ctl.max_terms, "(lin) coefficient sum"));
        }
        auto coef = [&](int k) { return std::pow(-t, k) * (1.0 + rho * nyt * S[size_t(k)]); };
        for (int k = 1; k <= n; ++k) M(i, k - 1) = coef(k);
        Complex b = -a0 * coef(0);
        if (r < 1.0) {
            Complex prod = 1.0;
            Complex wsum = absorb(tail_sum(
                [&](int h) mutable {
                    if (h > 0) prod *= phi_y(prep, -std::pow(a, h) * t);
                    return std::exp(std::pow(a, h + 1) * t * w) * std::pow(rho, h) * prod;
                },
                rho, tol, ctl.max_terms, "(lin) right side"));
            b += -rho * nyt * wsum;
        }
        rhs[size_t(i)] = b;
    }

    for (int j = 0; j < l; ++j) {
        const Complex sj = prep.sj[size_t(j)];
        Complex nys = prep.NY(sj);
        // The h-term integrands have poles where a^i s_j y hits -t.
        for (int i = 0; i < ctl.max_terms; ++i) {
            double ai = std::pow(a, i);
            if (ai < 1e-14) break;
            for (Complex t : prep.ti) check_ray_pole(spec.V, -t / ai, sj, "series factor");
        }
        std::vector<Complex> T(size_t(n) + 1);
        for (int k = 0; k <= n; ++k) {
            T[size_t(k)] = absorb(tail_sum(
                [&, k](int h) {
                    return std::pow(rho, h) * spec.V.integrate_negative(
                                                  [&](double y) {
                                                      Complex prod = 1.0;
                                                      for (int i = 0; i < h; ++i)
                                                          prod *= phi_y(prep,
                                                                        std::pow(a, i) * sj * y);
                                                      return std::pow(std::pow(a, h) * y, k) *
                                                             prod /
                                                             prep.DY(std::pow(a, h) * sj * y);
                                                  },
                                                  rule);
                },
                rho, tol, ctl.max_terms, "(lin2) coefficient sum"));
        }
        auto dcoef = [&](int k) {
            return std::pow(sj, k) * (1.0 - r * (1.0 - prep.p) * nys * T[size_t(k)]);
        };
        for (int k = 1; k <= n; ++k) M(m + j, k - 1) = dcoef(k);
        Complex b = -a0 * dcoef(0);
        if (r < 1.0) {
            Complex wsum = absorb(tail_sum(
                [&](int h) {
                    return std::pow(rho, h) * spec.V.integrate_negative(
                                                  [&](double y) {
                                                      Complex prod = 1.0;
                                                      for (int i = 0; i < h; ++i)
                                                          prod *= phi_y(prep,
                                                                        std::pow(a, i) * sj * y);
                                                      return std::exp(-std::pow(a, h) * sj * y *
                                                                      w) *
                                                             prod;
                                                  },
                                                  rule);
                },
                rho, tol, ctl.max_terms, "(lin2) right side"));
            b += r * (1.0 - prep.p) * nys * wsum;
        }
        rhs[size_t(m + j)] = b;
    }

    auto report = solve_linear(M, rhs);
    CoeffVector cv;
    cv.r = r;
    cv.coeffs.resize(size_t(n) + 1);
    cv.coeffs[0] = a0;
    for (int k = 1; k <= n; ++k) cv.coeffs[size_t(k)] = report.solution[size_t(k) - 1];
    cv.solve_report = std::move(report);
    ctl.achieved_terms = used;
    ctl.tail_bound = tail;
    check_realness(cv.coeffs, prep, 0.0, spec.w0, false);
    return cv;
}

Complex series_lst(const M2Prep& prep, double w, double r, Complex s, const CoeffVector& coeffs,
                   SeriesControl& ctl, bool with_exp) {
    const double a = prep.a;
    const double rho = (r < 1.0 ? r : 1.0) * prep.p;
    Complex prod = 1.0;
    double supL = 0.0;
    auto L = [&](Complex z) {
        Complex val = poly_sum(coeffs.coeffs, z) / prep.DY(z);
        if (with_exp) val += std::exp(-z * w);
        supL = std::max(supL, std::abs(val));
        return val;
    };
    SumOut out;
    for (int h = 0; h < ctl.max_terms; ++h) {
        Complex zh = std::pow(a, h) * s;
        Complex term = L(zh) * std::pow(rho, h) * prod;
        prod *= phi_y(prep, zh);
        out.value += term;
        out.terms = h + 1;
        out.tail = std::pow(rho, h + 1) * supL / (1.0 - rho);
        if (h >= 1 && out.tail <= ctl.tail_tol) break;
        if (h + 1 == ctl.max_terms)
            throw SeriesBudgetExceeded("m2: transform series budget exhausted");
    }
    ctl.achieved_terms = out.terms;
    ctl.tail_bound = out.tail;
    return out.value;
}

// The termwise series has removable singularities where a^h s lands on a
// zero of D_Y (the full transform is analytic there, only individual terms
// blow up). Detect proximity and recover the analytic value by the
// mean-value property: average the series over a small circle around s.
bool near_removable(const M2Prep& prep, Complex s) {
    std::vector<Complex> zeros = prep.sj;
    for (Complex t : prep.ti) zeros.push_back(-t);
    double minmag = 1e300;
    for (const Complex& z : zeros) minmag = std::min(minmag, std::abs(z));
    double mag = std::abs(s);
    for (int h = 0; h < 400 && mag > 0.5 * minmag; ++h, mag *= prep.a) {
        double ah = std::pow(prep.a, h);
        for (const Complex& z : zeros)
            if (std::abs(ah * s - z) < 1e-4 * (1.0 + std::abs(z))) return true;
    }
    return false;
}

Complex series_lst_guarded(const M2Prep& prep, double w, double r, Complex s,
                           const CoeffVector& coeffs, SeriesControl& ctl, bool with_exp) {
    if (!near_removable(prep, s)) return series_lst(prep, w, r, s, coeffs, ctl, with_exp);
    const int n = 12;
    const double eps = 1e-2 * (1.0 + std::abs(s));
    Complex acc = 0.0;
    for (int k = 0; k < n; ++k) {
        double th = (2.0 * k + 1.0) * M_PI / n;
        acc += series_lst(prep, w, r, s + eps * Complex(std::cos(th), std::sin(th)), coeffs, ctl,
                          with_exp);
    }
    return acc / double(n);
}

void require_a_range(const M2Prep& prep) {
    if (prep.a > 1.0)
        throw UnsupportedParameter(
            "m2: a > 1 has no convergent series representation (ratio test diverges)");
}

}  // namespace

DeltaRoots m2_find_deltas(const ModelSpec& spec, double r) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("m2_find_deltas: need r in (0,1)");
    auto prep = prepare(spec);
    DeltaRoots out;
    out.r = r;
    // Work with the exact transform polynomials here: the solver's internal
    // repeated-pole splitting perturbs D_Y by ~1e-6, which would otherwise
    // surface as a matching residual in 1 - r p Phi_Y(delta).
    out.roots = find_deltas_poly(spec.y_den(), spec.y_num(),
                                 int(spec.A.lst().poles.size()), r * prep.p, r,
                                 &out.all_roots);
    return out;
}

CoeffVector m2_transient_coeffs_a1(const ModelSpec& spec, double r, const QuadRule& rule) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("m2_transient_coeffs_a1: need r in (0,1)");
    auto prep = prepare(spec);
    if (std::fabs(prep.a - 1.0) > 1e-12)
        throw DomainError("m2_transient_coeffs_a1: requires a = 1");
    return coeffs_a1(spec, prep, r, rule);
}

Complex m2_transient_lst_a1(const ModelSpec& spec, double r, Complex s,
                            const CoeffVector& coeffs) {
    auto prep = prepare(spec);
    return lst_a1(spec, prep, r, s, coeffs);
}

CoeffVector m2_transient_coeffs_alt(const ModelSpec& spec, double r, const QuadRule& rule,
                                    SeriesControl& ctl) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("m2_transient_coeffs_alt: need r in (0,1)");
    auto prep = prepare(spec);
    require_a_range(prep);
    if (prep.a >= 1.0) throw DomainError("m2_transient_coeffs_alt: requires a < 1");
    return coeffs_alt(spec, prep, r, rule, ctl);
}

Complex m2_transient_lst_alt(const ModelSpec& spec, double r, Complex s, const CoeffVector& coeffs,
                             SeriesControl& ctl) {
    auto prep = prepare(spec);
    require_a_range(prep);
    return series_lst_guarded(prep, spec.w0, r, s, coeffs, ctl, true);
}

M2Stationary m2_stationary(const ModelSpec& spec, const QuadRule& rule) {
    auto prep = prepare(spec);
    require_a_range(prep);
    auto verdict = classify(spec, rule);
    if (verdict.kind != StabilityVerdictKind::ProperUniqueLimit)
        throw StabilityError("m2_stationary: no proper limiting distribution certified");

    const bool unit = std::fabs(prep.a - 1.0) <= 1e-12;
    SeriesControl ctl;
    auto limit_solve = [&](double r) {
        return unit ? coeffs_a1(spec, prep, r, rule) : coeffs_alt(spec, prep, r, rule, ctl);
    };
    CoeffVector station = limit_solve(1.0);

    // Independent route: extrapolate (1-r) a_k(r) from transient solves
    // (quadratic in h = 1-r through three points).
    const double h1 = 0.1, h2 = 0.01, h3 = 0.001;
    CoeffVector c1 = limit_solve(1.0 - h1), c2 = limit_solve(1.0 - h2),
                c3 = limit_solve(1.0 - h3);
    for (size_t k = 0; k < station.coeffs.size(); ++k) {
        Complex f1 = h1 * c1.coeffs[k], f2 = h2 * c2.coeffs[k], f3 = h3 * c3.coeffs[k];
        Complex ext = f1 * (h2 * h3) / ((h1 - h2) * (h1 - h3)) +
                      f2 * (h1 * h3) / ((h2 - h1) * (h2 - h3)) +
                      f3 * (h1 * h2) / ((h3 - h1) * (h3 - h2));
        double denom = std::max(1.0, std::abs(station.coeffs[k]));
        if (std::abs(ext - station.coeffs[k]) / denom > 1e-4)
            throw ExtrapolationMismatch("m2_stationary: limit system and r->1 extrapolation "
                                        "disagree at coefficient " +
                                        std::to_string(k));
    }

    M2Stationary out;
    out.coeffs = std::move(station);
    out.atom = (out.coeffs.coeffs.back() / prep.DY.coeffs().back()).real();
    return out;
}

Complex m2_stationary_lst(const ModelSpec& spec, Complex s, const CoeffVector& coeffs,
                          SeriesControl& ctl) {
    auto prep = prepare(spec);
    if (std::fabs(prep.a - 1.0) <= 1e-12) return lst_a1(spec, prep, 1.0, s, coeffs);
    require_a_range(prep);
    return series_lst_guarded(prep, spec.w0, 1.0, s, coeffs, ctl, false);
}

}  // namespace arproc
