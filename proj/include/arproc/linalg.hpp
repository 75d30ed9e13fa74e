#pragma once

#include <vector>

#include "arproc/poly.hpp"

namespace arproc {

/// Dense complex matrix in row-major order.
struct CMatrix {
    int n = 0;
    std::vector<Complex> a;

    explicit CMatrix(int size = 0) : n(size), a(size_t(size) * size, Complex(0.0)) {}
    Complex& operator()(int i, int j) { return a[size_t(i) * n + j]; }
    const Complex& operator()(int i, int j) const { return a[size_t(i) * n + j]; }
    static CMatrix identity(int size);
};

struct LinSolveReport {
    std::vector<Complex> solution;
    double condition_estimate = 0.0;
    double residual_norm = 0.0;  // ||Ax - b||_inf, computed post-solve
};

/// Gaussian elimination with partial pivoting. The condition estimate is
/// ||A||_inf * ||A^-1||_inf with the inverse formed explicitly (systems here
/// are small). Throws SingularMatrix when a pivot magnitude falls below
/// 1e-13 times the largest row norm.
LinSolveReport solve_linear(const CMatrix& A, const std::vector<Complex>& b);

}  // namespace arproc
