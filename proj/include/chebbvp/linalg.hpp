#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chebbvp/errors.hpp"

namespace chebbvp {

/// Scale of finite-difference steps: sqrt of the double-precision epsilon.
inline constexpr double default_fd_step = 1.4901161193847656e-08;

/// Pivots smaller than this are treated as exact zeros during factorization.
inline constexpr double pivot_floor = 1e-300;

/// Dense row-major matrix of doubles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    [[nodiscard]] double operator()(int i, int j) const {
        return data[static_cast<std::size_t>(i) * cols + j];
    }
    [[nodiscard]] double& operator()(int i, int j) {
        return data[static_cast<std::size_t>(i) * cols + j];
    }
};

/// Largest absolute entry of a vector; 0 for an empty vector.
[[nodiscard]] inline double norm_inf(std::span<const double> v) noexcept {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

/// Solve a x = b by LU factorization with partial pivoting. The matrix is
/// taken by value and factored in place.
[[nodiscard]] inline std::vector<double> lu_solve(Matrix a, std::vector<double> b) {
    if (a.rows != a.cols)
        throw ShapeError("lu_solve: matrix must be square, got " +
                         std::to_string(a.rows) + "x" + std::to_string(a.cols));
    if (static_cast<int>(b.size()) != a.rows)
        throw ShapeError("lu_solve: right-hand side has " +
                         std::to_string(b.size()) + " entries, expected " +
                         std::to_string(a.rows));
    const int n = a.rows;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < pivot_floor)
            throw SingularMatrix("lu_solve: pivot " + std::to_string(best) +
                                 " in column " + std::to_string(col) +
                                 " is numerically zero");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
            std::swap(b[piv], b[col]);
        }
        const double inv = 1.0 / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) * inv;
            if (f == 0.0) continue;
            a(r, col) = 0.0;
            for (int c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a(r, c) * b[c];
        b[r] = acc / a(r, r);
    }
    return b;
}

/// Forward-difference Jacobian of f at y. Column j uses the step
/// h_j = step_scale * (1 + |y_j|). The callable maps a span of doubles to
/// a vector of doubles; a non-finite entry in any evaluation is an error.
template <class Fn>
[[nodiscard]] Matrix fd_jacobian(Fn&& f, std::span<const double> y,
                                 double step_scale = default_fd_step) {
    std::vector<double> base = f(y);
    for (double v : base)
        if (!std::isfinite(v))
            throw EvaluationError("fd_jacobian: non-finite value at the base point");
    Matrix jac(static_cast<int>(base.size()), static_cast<int>(y.size()));
    std::vector<double> probe(y.begin(), y.end());
    for (int j = 0; j < jac.cols; ++j) {
        const double h = step_scale * (1.0 + std::abs(y[j]));
        const double saved = probe[j];
        probe[j] = saved + h;
        const std::vector<double> shifted = f(probe);
        if (shifted.size() != base.size())
            throw ShapeError("fd_jacobian: inconsistent output size from callable");
        for (int i = 0; i < jac.rows; ++i) {
            const double v = shifted[i];
            if (!std::isfinite(v))
                throw EvaluationError(
                    "fd_jacobian: non-finite value when perturbing coordinate " +
                    std::to_string(j));
            jac(i, j) = (v - base[i]) / h;
        }
        probe[j] = saved;
    }
    return jac;
}

}  // namespace chebbvp
