#include "arproc/model3.hpp"

#include <algorithm>
#include <cmath>

#include "arproc/errors.hpp"
#include "arproc/pchip.hpp"
#include "arproc/special.hpp"

namespace arproc {

namespace {

// Smooth parts of lambda Phi_B(t) / (t (lambda - t)) after removing the
// poles at 0 and lambda:
//   g0(t) = (Phi_B(t) - 1) / t        -> -E B   as t -> 0,
//   g1(t) = (Phi_B(t) - Phi_B(l)) / (l - t) -> -Phi_B'(l) as t -> l.
struct Smooth {
    const M3Kernel* k;
    double phib_l, dphib_l, mean_b;

    explicit Smooth(const M3Kernel& kernel)
        : k(&kernel),
          phib_l(kernel.B.lst_eval(Complex(kernel.lambda)).real()),
          dphib_l(kernel.B.lst_deriv(kernel.lambda)),
          mean_b(kernel.B.mean()) {}

    double phib(double t) const { return k->B.lst_eval(Complex(t)).real(); }

    double g01(double t) const {
        double g0 = std::fabs(t) < 1e-12 ? -mean_b : (phib(t) - 1.0) / t;
        double g1 = std::fabs(k->lambda - t) < 1e-9 ? -dphib_l
                                                    : (phib(t) - phib_l) / (k->lambda - t);
        return g0 + g1;
    }

    // int_u^s (g0 + g1) dt, either orientation.
    double a_int(double u, double s) const {
        if (u == s) return 0.0;
        double lo = std::min(u, s), hi = std::max(u, s);
        double v = integrate_real([this](double t) { return g01(t); }, lo, hi, k->rule);
        return u < s ? v : -v;
    }
};

// int_a^b dist^e g(x) dx with dist the distance to the singular endpoint and
// e > -1; whole powers are folded into g so the power-substitution rule sees
// an exponent in (0,1].
double pow_endpoint(const std::function<double(double)>& g, double a, double b, double e,
                    bool at_lower, const QuadRule& rule) {
    int m = int(std::ceil(e));
    double gamma = e - m + 1.0;
    auto wrapped = [&](double x) {
        double dist = at_lower ? x - a : b - x;
        return std::pow(dist, m) * g(x);
    };
    return integrate_power_endpoint(wrapped, a, b, gamma, at_lower, rule);
}

// The boundedness constant Q = Psi_W(r,infinity) - p_0 in
// K(s) = s^(alpha-1) Phi_{W0}(s) - s^alpha/(lambda-s) Q, pinned by the
// requirement that the transform stays finite as s -> 0.
double solve_q(const Smooth& sm, double reff, double alpha) {
    const M3Kernel& k = *sm.k;
    const double l = k.lambda, gamma = reff * sm.phib_l, mid = 0.5 * l;
    auto weight = [&](double u) { return std::exp(reff * sm.a_int(u, 0.0)); };

    double num =
        pow_endpoint([&](double u) { return std::exp(-u * k.w0) * std::pow(l - u, gamma) *
                                            weight(u); },
                     0.0, mid, alpha - 1.0 - reff, true, k.rule) +
        integrate_power_endpoint(
            [&](double u) {
                return (l - u) * std::pow(u, alpha - 1.0 - reff) * std::exp(-u * k.w0) *
                       weight(u);
            },
            mid, l, gamma, false, k.rule);
    double den =
        pow_endpoint([&](double u) { return std::pow(l - u, gamma - 1.0) * weight(u); }, 0.0,
                     mid, alpha - reff, true, k.rule) +
        integrate_power_endpoint(
            [&](double u) { return std::pow(u, alpha - reff) * weight(u); }, mid, l, gamma,
            false, k.rule);
    return num / den;
}

// Psi^(alpha)(r,s) = K(s) + lambda reff Phi_B(s) / (s (lambda-s)) J(s) with
// the u -> lambda blow-up of J handled by the power-endpoint substitution.
double psi_core(const Smooth& sm, double reff, double alpha, double s) {
    const M3Kernel& k = *sm.k;
    const double l = k.lambda, gamma = reff * sm.phib_l;
    const double q = solve_q(sm, reff, alpha);

    double j;
    if (s > l) {
        j = integrate_power_endpoint(
            [&](double u) {
                return (std::pow(u, alpha - 1.0) * std::exp(-u * k.w0) * (u - l) +
                        q * std::pow(u, alpha)) *
                       std::pow(s / u, reff) * std::pow(s - l, -gamma) *
                       std::exp(reff * sm.a_int(u, s));
            },
            l, s, gamma, true, k.rule);
    } else {
        j = -integrate_power_endpoint(
            [&](double u) {
                return (std::pow(u, alpha - 1.0) * std::exp(-u * k.w0) * (l - u) -
                        q * std::pow(u, alpha)) *
                       std::pow(s / u, reff) * std::pow(l - s, -gamma) *
                       std::exp(reff * sm.a_int(u, s));
            },
            s, l, gamma, false, k.rule);
    }
    double kval = std::pow(s, alpha - 1.0) * std::exp(-s * k.w0) -
                  std::pow(s, alpha) / (l - s) * q;
    return kval + l * reff * sm.phib(s) / (s * (l - s)) * j;
}

void check_not_lambda(const M3Kernel& k, double s) {
    if (std::fabs(s - k.lambda) < 1e-9 * (1.0 + k.lambda))
        throw SEvalAtLambda("m3: transform evaluation at s = lambda is not defined termwise");
}

}  // namespace

void M3Kernel::validate() const {
    if (!(lambda > 0.0)) throw DomainError("M3Kernel: lambda must be positive");
    if (!(r > 0.0 && r <= 1.0)) throw DomainError("M3Kernel: r must lie in (0,1]");
    if (w0 < 0.0) throw DomainError("M3Kernel: w0 must be non-negative");
    if (!(B.mean() > 0.0) || !std::isfinite(B.mean()))
        throw DomainError("M3Kernel: B must have a positive finite mean");
}

double m3_exponent(const M3Kernel& k, double u, double s) {
    k.validate();
    if (u == s) return 0.0;
    auto same_side = [](double a, double b, double c) {
        return (a < c && b < c) || (a > c && b > c);
    };
    if (!same_side(u, s, 0.0) || !same_side(u, s, k.lambda))
        throw DomainError("m3_exponent: (u,s) must not straddle 0 or lambda");
    Smooth sm(k);
    double gamma = k.r * sm.phib_l;
    return k.r * sm.a_int(u, s) + k.r * std::log(s / u) +
           gamma * std::log((k.lambda - u) / (k.lambda - s));
}

double m3_transient_lst(const M3Kernel& k, double s) {
    k.validate();
    if (!(k.r < 1.0)) throw DomainError("m3_transient_lst: need r < 1 (use the stationary form)");
    if (s < 0.0) throw DomainError("m3_transient_lst: need s >= 0");
    if (s == 0.0) return 1.0 / (1.0 - k.r);
    check_not_lambda(k, s);
    Smooth sm(k);
    return psi_core(sm, k.r, 1.0, s);
}

double m3_p_infinity(const M3Kernel& k) {
    k.validate();
    Smooth sm(k);
    const double l = k.lambda, g1 = sm.phib_l;
    double inv = integrate_power_endpoint(
        [&](double u) { return std::pow(l, -g1) * std::exp(-sm.a_int(0.0, u)); }, 0.0, l, g1,
        false, k.rule);
    double p = 1.0 / inv;
    if (k.B.kind() == DistKind::Exponential) {
        double mu = k.B.rates()[0];
        double a = l / (l + mu), b = mu / (l + mu);
        double closed = std::pow(mu, a) * std::pow(l, b) /
                        ((l + mu) * incomplete_beta(a, b, 1.0 + a));
        if (std::fabs(p - closed) > 1e-8 * std::max(1.0, std::fabs(closed)))
            throw ToleranceNotMet("m3_p_infinity: quadrature and beta closed form disagree",
                                  p, 0.0, std::fabs(p - closed));
    }
    return p;
}

double m3_stationary_lst(const M3Kernel& k, double s) {
    k.validate();
    if (s < 0.0) throw DomainError("m3_stationary_lst: need s >= 0");
    if (s == 0.0) return 1.0;
    check_not_lambda(k, s);
    Smooth sm(k);
    const double l = k.lambda, g1 = sm.phib_l;
    const double p = m3_p_infinity(k);
    double j;
    if (s > l) {
        j = integrate_power_endpoint(
            [&](double u) { return s * std::pow(s - l, -g1) * std::exp(sm.a_int(u, s)); }, l, s,
            g1, true, k.rule);
    } else {
        j = integrate_power_endpoint(
            [&](double u) { return s * std::pow(l - s, -g1) * std::exp(sm.a_int(u, s)); }, s, l,
            g1, false, k.rule);
    }
    return p / (s - l) * (s - l * sm.phib(s) / s * j);
}

double m3_mean(const M3Kernel& k) {
    double p = m3_p_infinity(k);
    return 2.0 * (k.B.mean() - (1.0 - p) / k.lambda);
}

MomentSeq m3_moments_expB(double lambda, double mu, int j) {
    if (j < 1) throw DomainError("m3_moments_expB: need j >= 1");
    M3Kernel k;
    k.lambda = lambda;
    k.B = DistSpec::Exponential(mu);
    MomentSeq out;
    out.p_inf = m3_p_infinity(k);
    out.mu_le_lambda = mu <= lambda;
    out.omegas.reserve(size_t(j));
    double w1 = 2.0 * (1.0 / mu - (1.0 - out.p_inf) / lambda);
    out.omegas.push_back(w1);
    if (j >= 2) out.omegas.push_back(3.0 * (1.0 - out.p_inf - (mu - lambda) * w1) / (mu * lambda));
    for (int n = 3; n <= j; ++n) {
        double wk = ((double(n) * n - 1.0) * out.omegas[size_t(n) - 3] -
                     (n + 1.0) * (mu - lambda) * out.omegas[size_t(n) - 2]) /
                    (lambda * mu);
        out.omegas.push_back(wk);
    }
    for (double w : out.omegas)
        if (w < 0.0) out.negative_moment = true;
    return out;
}

std::vector<double> m3_default_grid(const M3Kernel& k, int n) {
    double hi = std::max(4.0 * k.lambda, 20.0 / k.B.mean());
    return chebyshev_grid(hi, n);
}

M3Iteration m3_iterate_transient(const M3Kernel& k, int n, const std::vector<double>& s_grid) {
    k.validate();
    if (n < 1) throw DomainError("m3_iterate_transient: need n >= 1");
    if (s_grid.size() < 8 || s_grid.front() != 0.0)
        throw DomainError("m3_iterate_transient: grid must start at 0 with at least 8 points");
    for (size_t i = 1; i < s_grid.size(); ++i)
        if (s_grid[i] <= s_grid[i - 1])
            throw DomainError("m3_iterate_transient: grid must be strictly increasing");
    const double l = k.lambda;
    if (s_grid.back() < l) throw DomainError("m3_iterate_transient: grid must cover lambda");

    Smooth sm(k);
    M3Iteration out;
    out.p.push_back(k.w0 == 0.0 ? 1.0 : 0.0);
    std::vector<double> cur(s_grid.size());
    for (size_t g = 0; g < s_grid.size(); ++g) cur[g] = std::exp(-s_grid[g] * k.w0);
    out.phi.push_back(cur);

    // Interpolation-order sanity check: the half grid must reproduce the
    // integral of the initial transform.
    {
        Pchip full(s_grid, cur);
        std::vector<double> xs2, ys2;
        for (size_t g = 0; g < s_grid.size(); g += 2) {
            xs2.push_back(s_grid[g]);
            ys2.push_back(cur[g]);
        }
        if (xs2.back() != s_grid.back()) {
            xs2.push_back(s_grid.back());
            ys2.push_back(cur.back());
        }
        Pchip half(xs2, ys2);
        double i1 = full.integral_from_start(l), i2 = half.integral_from_start(l);
        if (std::fabs(i1 - i2) > 1e-6 * std::max(1.0, std::fabs(i1)))
            throw GridTooCoarse("m3_iterate_transient: interpolation orders disagree");
    }

    for (int step = 0; step < n; ++step) {
        Pchip interp(s_grid, cur);
        double p_next = sm.phib_l / l * interp.integral_from_start(l);
        std::vector<double> next(s_grid.size());
        for (size_t g = 0; g < s_grid.size(); ++g) {
            double s = s_grid[g];
            if (s == 0.0) {
                next[g] = 1.0;
            } else if (std::fabs(s - l) < 1e-8 * (1.0 + l)) {
                // Removable point: -d/ds of the numerator at lambda.
                double il = interp.integral_from_start(l);
                double nd = sm.dphib_l * il + sm.phib_l * interp(l) - sm.phib_l * il / l - p_next;
                next[g] = -nd;
            } else {
                next[g] = l * sm.phib(s) * interp.integral_from_start(s) / (s * (l - s)) -
                          s * p_next / (l - s);
            }
        }
        out.p.push_back(p_next);
        out.phi.push_back(next);
        cur = std::move(next);
    }
    return out;
}

double m3_alpha_transient(const M3Kernel& k, double alpha, double s) {
    k.validate();
    if (!(alpha > 0.0)) throw DomainError("m3_alpha_transient: need alpha > 0");
    if (!(k.r < 1.0)) throw DomainError("m3_alpha_transient: need r < 1");
    if (k.r * alpha >= 1.0)
        throw UnsupportedParameter(
            "m3_alpha_transient: r*alpha >= 1 is outside the solvable range");
    if (s < 0.0) throw DomainError("m3_alpha_transient: need s >= 0");
    if (s == 0.0) return 1.0 / (1.0 - k.r);
    check_not_lambda(k, s);
    Smooth sm(k);
    return psi_core(sm, k.r * alpha, alpha, s) / std::pow(s, alpha - 1.0);
}

}  // namespace arproc
