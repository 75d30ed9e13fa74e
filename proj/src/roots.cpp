#include "arproc/roots.hpp"

#include <algorithm>
#include <cmath>

#include "arproc/errors.hpp"

namespace arproc {

namespace {

// Cauchy bound on root magnitudes: 1 + max|c_k| / |c_n|.
double root_radius(const std::vector<Complex>& c) {
    double lead = std::abs(c.back());
    double m = 0.0;
    for (size_t k = 0; k + 1 < c.size(); ++k) m = std::max(m, std::abs(c[k]));
    return 1.0 + m / lead;
}

// Symmetrize the root set of a real-coefficient polynomial: near-real roots
// are projected onto the real axis, the rest are matched into conjugate pairs.
void conjugate_symmetrize(std::vector<Complex>& roots, double tol) {
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        double scale = 1.0 + std::abs(roots[i]);
        if (std::abs(roots[i].imag()) <= tol * scale) {
            roots[i] = Complex(roots[i].real(), 0.0);
            used[i] = true;
            continue;
        }
        size_t best = i;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < roots.size(); ++j) {
            if (j == i || used[j]) continue;
            double d = std::abs(roots[j] - std::conj(roots[i]));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best != i && best_d <= 1e-6 * scale) {
            Complex avg = 0.5 * (roots[i] + std::conj(roots[best]));
            roots[i] = avg;
            roots[best] = std::conj(avg);
            used[i] = used[best] = true;
        } else {
            used[i] = true;
        }
    }
}

}  // namespace

std::vector<Complex> poly_roots(const Poly& p, int max_iter) {
    if (p.degree() < 1 || p.is_zero())
        throw DomainError("poly_roots: degree must be at least 1");

    std::vector<Complex> c = p.coeffs();
    // Deflate exact roots at the origin.
    size_t zero_roots = 0;
    while (zero_roots + 1 < c.size() && c[zero_roots] == Complex(0.0)) ++zero_roots;
    c.erase(c.begin(), c.begin() + zero_roots);

    const int n = static_cast<int>(c.size()) - 1;
    std::vector<Complex> roots(zero_roots, Complex(0.0));
    if (n == 0) return roots;
    if (n == 1) {
        roots.push_back(-c[0] / c[1]);
        return roots;
    }

    const Poly q{std::vector<Complex>(c)};
    const Poly dq = q.derivative();
    const double scale = 1.0 + q.max_abs_coeff();
    const double target = 1e-10 * scale;

    // Initial guesses on a circle, angles offset to avoid symmetry traps.
    std::vector<Complex> z(n);
    double radius = root_radius(c);
    for (int k = 0; k < n; ++k) {
        double theta = 2.0 * M_PI * k / n + 0.4;
        z[k] = radius * Complex(std::cos(theta), std::sin(theta));
    }

    bool converged = false;
    for (int iter = 0; iter < max_iter && !converged; ++iter) {
        converged = true;
        for (int k = 0; k < n; ++k) {
            Complex pk = q(z[k]);
            if (std::abs(pk) <= target) continue;
            Complex dk = dq(z[k]);
            Complex newton = (dk != Complex(0.0)) ? pk / dk : Complex(1e-8);
            Complex sum = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                Complex diff = z[k] - z[j];
                if (std::abs(diff) < 1e-300) diff = Complex(1e-300);
                sum += 1.0 / diff;
            }
            Complex denom = 1.0 - newton * sum;
            Complex step = (std::abs(denom) > 1e-300) ? newton / denom : newton;
            z[k] -= step;
            if (std::abs(step) > 1e-14 * (1.0 + std::abs(z[k]))) converged = false;
        }
    }

    // Newton polish.
    for (int k = 0; k < n; ++k) {
        for (int it = 0; it < 8; ++it) {
            Complex pk = q(z[k]);
            Complex dk = dq(z[k]);
            if (std::abs(dk) < 1e-300) break;
            Complex step = pk / dk;
            if (std::abs(step) > 0.5 * (1.0 + std::abs(z[k]))) break;
            z[k] -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(z[k]))) break;
        }
    }

    const double accept = 1e-8 * scale;
    for (int k = 0; k < n; ++k)
        if (!(std::abs(q(z[k])) <= accept))
            throw NonConvergence("poly_roots: residual above tolerance after iteration budget");

    if (q.real_coefficients(1e-14)) conjugate_symmetrize(z, 1e-8);

    roots.insert(roots.end(), z.begin(), z.end());
    return roots;
}

}  // namespace arproc
