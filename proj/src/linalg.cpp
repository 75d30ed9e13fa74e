#include "arproc/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "arproc/errors.hpp"

namespace arproc {

CMatrix CMatrix::identity(int size) {
    CMatrix m(size);
    for (int i = 0; i < size; ++i) m(i, i) = 1.0;
    return m;
}

namespace {

double inf_norm(const CMatrix& m) {
    double best = 0.0;
    for (int i = 0; i < m.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < m.n; ++j) row += std::abs(m(i, j));
        best = std::max(best, row);
    }
    return best;
}

// LU factorization with partial pivoting, in place; perm holds row order.
void lu_factor(CMatrix& lu, std::vector<int>& perm, double pivot_floor) {
    const int n = lu.n;
    perm.resize(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(lu(col, col));
        for (int i = col + 1; i < n; ++i) {
            double v = std::abs(lu(i, col));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < pivot_floor)
            throw SingularMatrix("solve_linear: pivot below threshold at column " + std::to_string(col));
        if (piv != col) {
            std::swap(perm[piv], perm[col]);
            for (int j = 0; j < n; ++j) std::swap(lu(piv, j), lu(col, j));
        }
        for (int i = col + 1; i < n; ++i) {
            Complex f = lu(i, col) / lu(col, col);
            lu(i, col) = f;
            for (int j = col + 1; j < n; ++j) lu(i, j) -= f * lu(col, j);
        }
    }
}

std::vector<Complex> lu_solve(const CMatrix& lu, const std::vector<int>& perm,
                              const std::vector<Complex>& b) {
    const int n = lu.n;
    std::vector<Complex> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
        x[i] /= lu(i, i);
    }
    return x;
}

}  // namespace

LinSolveReport solve_linear(const CMatrix& A, const std::vector<Complex>& b) {
    if (A.n != static_cast<int>(b.size()))
        throw DomainError("solve_linear: dimension mismatch");
    const int n = A.n;
    if (n == 0) return {};

    double max_row_norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::abs(A(i, j));
        max_row_norm = std::max(max_row_norm, row);
    }

    CMatrix lu = A;
    std::vector<int> perm;
    lu_factor(lu, perm, 1e-13 * max_row_norm);

    LinSolveReport rep;
    rep.solution = lu_solve(lu, perm, b);

    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        Complex r = -b[i];
        for (int j = 0; j < n; ++j) r += A(i, j) * rep.solution[j];
        res = std::max(res, std::abs(r));
    }
    rep.residual_norm = res;

    // ||A^-1||_inf from explicit inverse columns.
    CMatrix inv(n);
    std::vector<Complex> e(n, Complex(0.0));
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        auto col = lu_solve(lu, perm, e);
        e[j] = 0.0;
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    rep.condition_estimate = inf_norm(A) * inf_norm(inv);
    return rep;
}

}  // namespace arproc
