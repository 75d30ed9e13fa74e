#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "arproc/errors.hpp"
#include "arproc/linalg.hpp"
#include "arproc/pchip.hpp"
#include "arproc/poly.hpp"
#include "arproc/quad.hpp"
#include "arproc/roots.hpp"
#include "arproc/special.hpp"

using namespace arproc;

TEST_CASE("poly evaluation basics") {
    Poly one{Complex(1.0)};
    CHECK(one(Complex(3.0, 2.0)) == Complex(1.0));

    // D_B(s) = s + mu with mu = 1: value at 0 is the negated pole product
    Poly db{Complex(1.0), Complex(1.0)};
    CHECK(db(Complex(0.0)) == Complex(1.0));

    Poly q = Poly{Complex(1.0), Complex(1.0)} * Poly{Complex(2.0), Complex(1.0)};
    CHECK(std::abs(q(Complex(-1.0))) == 0.0);
    CHECK(q.degree() == 2);
    CHECK(q.coeffs()[0] == Complex(2.0));
}

TEST_CASE("poly from_roots and derivative") {
    Poly p = Poly::from_roots({Complex(-1.0), Complex(-2.0)});
    CHECK(std::abs(p(Complex(-2.0))) < 1e-14);
    Poly d = p.derivative();
    // (s+1)(s+2) -> 2s + 3
    CHECK(std::abs(d(Complex(0.0)) - Complex(3.0)) < 1e-14);
    CHECK(p.real_coefficients(1e-14));
}

TEST_CASE("poly_roots on simple polynomials") {
    auto r1 = poly_roots(Poly{Complex(1.0), Complex(1.0)});
    REQUIRE(r1.size() == 1);
    CHECK(std::abs(r1[0] - Complex(-1.0)) < 1e-10);

    auto r2 = poly_roots(Poly{Complex(-1.0), Complex(0.0), Complex(1.0)});
    REQUIRE(r2.size() == 2);
    double lo = std::min(r2[0].real(), r2[1].real());
    double hi = std::max(r2[0].real(), r2[1].real());
    CHECK(std::abs(lo + 1.0) < 1e-10);
    CHECK(std::abs(hi - 1.0) < 1e-10);
}

TEST_CASE("poly_roots conjugate closure on random real polynomials") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Complex> c;
        for (int k = 0; k <= 6; ++k) c.push_back(Complex(u(gen)));
        Poly p(c);
        auto roots = poly_roots(p);
        REQUIRE(int(roots.size()) == p.degree());
        for (const Complex& z : roots) {
            double best = 1e300;
            for (const Complex& w : roots) best = std::min(best, std::abs(std::conj(z) - w));
            CHECK(best < 1e-8);
        }
        double scale = 1.0 + p.max_abs_coeff();
        for (const Complex& z : roots) CHECK(std::abs(p(z)) <= 1e-8 * scale);
    }
}

TEST_CASE("right-half-plane root count for an exp/exp difference polynomial") {
    // D(s) = (s+1)(1-s) - r p, with r = p = 0.5: one positive root expected
    double rp = 0.25;
    Poly target = Poly{Complex(1.0), Complex(1.0)} * Poly{Complex(1.0), Complex(-1.0)} +
                  Poly{Complex(-rp)};
    auto roots = poly_roots(target);
    int pos = 0;
    for (Complex z : roots)
        if (z.real() > 0.0) ++pos;
    CHECK(pos == 1);
}

TEST_CASE("solve_linear identity and diagonal") {
    CMatrix I3 = CMatrix::identity(3);
    auto rep = solve_linear(I3, {Complex(1.0), Complex(2.0), Complex(3.0)});
    CHECK(std::abs(rep.solution[0] - Complex(1.0)) < 1e-14);
    CHECK(std::abs(rep.solution[2] - Complex(3.0)) < 1e-14);
    CHECK(rep.residual_norm == 0.0);

    CMatrix D(2);
    D(0, 0) = 2.0;
    D(1, 1) = 4.0;
    auto rep2 = solve_linear(D, {Complex(2.0), Complex(8.0)});
    CHECK(std::abs(rep2.solution[0] - Complex(1.0)) < 1e-14);
    CHECK(std::abs(rep2.solution[1] - Complex(2.0)) < 1e-14);
}

TEST_CASE("solve_linear recovers a planted solution") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix A(5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) A(i, j) = Complex(u(gen), u(gen)) + (i == j ? 5.0 : 0.0);
    std::vector<Complex> x, b(5, Complex(0.0));
    for (int i = 0; i < 5; ++i) x.push_back(Complex(u(gen), u(gen)));
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) b[i] += A(i, j) * x[j];
    auto rep = solve_linear(A, b);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(rep.solution[i] - x[i]) < 1e-10);
    double xn = 0.0, bn = 0.0, an = 0.0;
    for (int i = 0; i < 5; ++i) {
        xn = std::max(xn, std::abs(x[size_t(i)]));
        bn = std::max(bn, std::abs(b[size_t(i)]));
        double row = 0.0;
        for (int j = 0; j < 5; ++j) row += std::abs(A(i, j));
        an = std::max(an, row);
    }
    CHECK(rep.residual_norm <= 1e-8 * (an * xn + bn));
}

TEST_CASE("solve_linear rejects singular input") {
    CMatrix A(2);
    A(0, 0) = 1.0;
    A(0, 1) = 2.0;
    A(1, 0) = 2.0;
    A(1, 1) = 4.0;
    CHECK_THROWS_AS(solve_linear(A, {Complex(1.0), Complex(1.0)}), SingularMatrix);
}

TEST_CASE("adaptive quadrature on finite, semi-infinite, singular ranges") {
    QuadRule rule;
    CHECK(integrate_real([](double) { return 1.0; }, 0.0, 1.0, rule) == doctest::Approx(1.0));
    CHECK(integrate_real([](double t) { return std::exp(-t); }, 0.0, kInf, rule) ==
          doctest::Approx(1.0).epsilon(1e-10));
    QuadRule hinted = rule;
    hinted.singularity_hints = {0.0};
    double v = integrate_real([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 0.5, hinted);
    CHECK(std::abs(v - std::sqrt(2.0)) < 1e-8);
}

TEST_CASE("quadrature is linear on smooth test functions") {
    QuadRule rule;
    auto f = [](double t) { return std::sin(3.0 * t) + t * t; };
    auto g = [](double t) { return std::exp(-t) * std::cos(t); };
    double a = 2.5, b = -1.25;
    double lhs = integrate_real([&](double t) { return a * f(t) + b * g(t); }, 0.0, 2.0, rule);
    double rhs = a * integrate_real(f, 0.0, 2.0, rule) + b * integrate_real(g, 0.0, 2.0, rule);
    CHECK(std::abs(lhs - rhs) < 1e-9);
}

TEST_CASE("power-law endpoint integration") {
    QuadRule rule;
    // int_0^1 x^(gamma-1) dx = 1/gamma
    for (double g : {0.25, 0.5, 0.9, 1.0}) {
        double v = integrate_power_endpoint([](double) { return 1.0; }, 0.0, 1.0, g, true, rule);
        CHECK(std::abs(v - 1.0 / g) < 1e-10);
    }
    // int_0^2 (2-x)^(-1/2) (x+1) dx, by parts: known value
    double v = integrate_power_endpoint([](double x) { return x + 1.0; }, 0.0, 2.0, 0.5, false,
                                        rule);
    // substitute w = sqrt(2-x): 2 int_0^sqrt(2) (3 - w^2) dw = 14 sqrt(2) / 3
    double expect = 14.0 * std::sqrt(2.0) / 3.0;
    CHECK(std::abs(v - expect) < 1e-10);
}

TEST_CASE("incomplete beta function") {
    CHECK(incomplete_beta(0.0, 0.7, 1.3) == 0.0);
    CHECK(incomplete_beta(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    QuadRule rule;
    double quad = integrate_power_endpoint([](double u) { return std::sqrt(1.0 - u); }, 0.0, 0.5,
                                           0.5, true, rule);
    CHECK(std::abs(incomplete_beta(0.5, 0.5, 1.5) - quad) < 1e-10);
    // exact value pi/4 + 1/2 via the sin^2 substitution
    CHECK(incomplete_beta(0.5, 0.5, 1.5) == doctest::Approx(M_PI / 4.0 + 0.5).epsilon(1e-12));

    double prev = 0.0;
    for (double x = 0.05; x <= 1.0; x += 0.05) {
        double cur = incomplete_beta(x, 0.4, 2.2);
        CHECK(cur >= prev);
        prev = cur;
    }
    CHECK_THROWS_AS(incomplete_beta(-0.1, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(incomplete_beta(0.5, -1.0, 1.0), DomainError);
}

TEST_CASE("pchip interpolates monotone data and integrates exactly on nodes") {
    std::vector<double> x{0.0, 0.5, 1.0, 2.0, 3.0};
    std::vector<double> y;
    for (double t : x) y.push_back(std::exp(-t));
    Pchip f(x, y);
    for (size_t i = 0; i < x.size(); ++i) CHECK(f(x[i]) == doctest::Approx(y[i]));
    // interpolant of a decreasing function stays decreasing
    double prev = f(0.0);
    for (double t = 0.05; t <= 3.0; t += 0.05) {
        double cur = f(t);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
    CHECK(f.integral_from_start(3.0) == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(0.01));
}
