#include "arproc/special.hpp"

#include <cmath>

#include "arproc/errors.hpp"

namespace arproc {

namespace {

// Continued fraction for the regularized incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    const int max_it = 300;
    const double eps = 1e-16;
    const double fpmin = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_it; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw NonConvergence("incomplete_beta: continued fraction did not converge");
}

double regularized_ibeta(double x, double a, double b) {
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double ln_front = a * std::log(x) + b * std::log1p(-x) - std::lgamma(a) - std::lgamma(b) +
                      std::lgamma(a + b);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double beta_function(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double incomplete_beta(double x, double a, double b) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta: x must lie in [0,1]");
    if (!(a > 0.0 && b > 0.0)) throw DomainError("incomplete_beta: a and b must be positive");
    return regularized_ibeta(x, a, b) * beta_function(a, b);
}

}  // namespace arproc
