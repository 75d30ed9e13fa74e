#pragma once

#include <vector>

namespace arproc {

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slope limiting) on a
/// strictly increasing grid. Piecewise antiderivatives are analytic, which is
/// what the transform iteration needs for its cumulative integrals.
class Pchip {
  public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double t) const;

    /// int_{x_front}^{t} f, with t clamped to the grid range.
    double integral_from_start(double t) const;

    const std::vector<double>& grid() const { return x_; }
    const std::vector<double>& values() const { return y_; }

  private:
    int segment(double t) const;
    double segment_integral(int i, double t) const;

    std::vector<double> x_, y_, d_;       // nodes, values, node slopes
    std::vector<double> cum_;             // integral up to each node
};

/// n Chebyshev-spaced points on [0, hi] (endpoints included, ascending).
std::vector<double> chebyshev_grid(double hi, int n);

}  // namespace arproc
