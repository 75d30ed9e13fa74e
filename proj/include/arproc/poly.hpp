#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace arproc {

using Complex = std::complex<double>;

/// Dense polynomial with complex coefficients in ascending degree order.
/// The zero polynomial is represented by a single zero coefficient.
class Poly {
  public:
    Poly() : coeffs_{Complex(0.0)} {}
    explicit Poly(std::vector<Complex> coeffs);
    Poly(std::initializer_list<Complex> coeffs) : Poly(std::vector<Complex>(coeffs)) {}

    static Poly from_roots(const std::vector<Complex>& roots, Complex leading = 1.0);
    static Poly constant(Complex c) { return Poly({c}); }

    const std::vector<Complex>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const;

    /// Horner evaluation; exact for degree 0 and returns coeffs[0] at s=0.
    Complex operator()(Complex s) const;

    Poly derivative() const;
    bool real_coefficients(double tol = 0.0) const;
    double max_abs_coeff() const;

    Poly operator+(const Poly& other) const;
    Poly operator-(const Poly& other) const;
    Poly operator*(const Poly& other) const;
    Poly operator*(Complex c) const;

  private:
    void trim();
    std::vector<Complex> coeffs_;
};

}  // namespace arproc
