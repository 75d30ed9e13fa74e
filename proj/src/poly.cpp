#include "arproc/poly.hpp"

#include <algorithm>
#include <cmath>

namespace arproc {

Poly::Poly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_ = {Complex(0.0)};
    trim();
}

void Poly::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == Complex(0.0)) coeffs_.pop_back();
}

bool Poly::is_zero() const {
    return coeffs_.size() == 1 && coeffs_[0] == Complex(0.0);
}

Poly Poly::from_roots(const std::vector<Complex>& roots, Complex leading) {
    Poly p({leading});
    for (Complex r : roots) p = p * Poly({-r, Complex(1.0)});
    return p;
}

Complex Poly::operator()(Complex s) const {
    Complex acc = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Poly Poly::derivative() const {
    if (degree() == 0) return Poly({Complex(0.0)});
    std::vector<Complex> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * double(k);
    return Poly(std::move(d));
}

bool Poly::real_coefficients(double tol) const {
    double scale = max_abs_coeff();
    for (const Complex& c : coeffs_)
        if (std::abs(c.imag()) > tol * scale) return false;
    return true;
}

double Poly::max_abs_coeff() const {
    double m = 0.0;
    for (const Complex& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

Poly Poly::operator+(const Poly& other) const {
    std::vector<Complex> out(std::max(coeffs_.size(), other.coeffs_.size()), Complex(0.0));
    for (size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (size_t i = 0; i < other.coeffs_.size(); ++i) out[i] += other.coeffs_[i];
    return Poly(std::move(out));
}

Poly Poly::operator-(const Poly& other) const {
    return *this + other * Complex(-1.0);
}

Poly Poly::operator*(const Poly& other) const {
    if (is_zero() || other.is_zero()) return Poly();
    std::vector<Complex> out(coeffs_.size() + other.coeffs_.size() - 1, Complex(0.0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < other.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * other.coeffs_[j];
    return Poly(std::move(out));
}

Poly Poly::operator*(Complex c) const {
    std::vector<Complex> out = coeffs_;
    for (Complex& x : out) x *= c;
    return Poly(std::move(out));
}

}  // namespace arproc
