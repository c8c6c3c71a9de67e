#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "chebbvp/errors.hpp"

namespace chebbvp {

/// Tolerated overshoot when checking that an argument lies in [-1, 1].
inline constexpr double domain_slack = 1e-14;

/// Half-weight applied to the first and last index of node-indexed sums.
[[nodiscard]] inline double end_weight(int j, int degree) noexcept {
    return (j == 0 || j == degree) ? 0.5 : 1.0;
}

/// Series normalization constant: 2 for index 0, 1 otherwise.
[[nodiscard]] inline double norm_c(int i) noexcept { return i == 0 ? 2.0 : 1.0; }

namespace detail {

/// n! as a double; exact for the small n used here.
[[nodiscard]] inline double factorial(int n) noexcept {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// cos(n k pi / N) with exact argument reduction, so that values at
/// mirrored indices are exactly antisymmetric and the special angles
/// 0, pi/2, pi give exactly 1, 0, -1.
[[nodiscard]] inline double node_cos(int n, int k, int degree) noexcept {
    long long r = (static_cast<long long>(n) * k) % (2LL * degree);
    if (r > degree) r = 2LL * degree - r;
    double sign = 1.0;
    if (2 * r > degree) {
        r = degree - r;
        sign = -1.0;
    }
    if (2 * r == degree) return 0.0;
    if (r == 0) return sign;
    return sign * std::cos(static_cast<double>(r) * std::numbers::pi / degree);
}

}  // namespace detail

/// Chebyshev extrema grid: x_k = cos(k pi / N), k = 0..N, strictly
/// decreasing from 1 to -1. Endpoints are exact; for even N the midpoint
/// is exactly zero, and the grid is exactly antisymmetric.
[[nodiscard]] inline std::vector<double> gauss_lobatto_nodes(int degree) {
    if (degree < 1)
        throw InvalidDegree("gauss_lobatto_nodes: degree must be at least 1, got " +
                            std::to_string(degree));
    std::vector<double> x(degree + 1);
    const int half = degree / 2;
    for (int k = 0; k < half; ++k)
        x[k] = std::cos(k * std::numbers::pi / degree);
    x[0] = 1.0;
    if (degree % 2 == 0)
        x[half] = 0.0;
    else
        x[half] = std::cos(half * std::numbers::pi / degree);
    for (int k = half + 1; k <= degree; ++k) x[k] = -x[degree - k];
    return x;
}

/// Roots of T_n: cos((2k - 1) pi / (2n)), k = 1..n, strictly decreasing.
/// Exactly antisymmetric, with an exact zero in the middle for odd n.
[[nodiscard]] inline std::vector<double> cheb_roots(int n) {
    if (n < 1)
        throw InvalidDegree("cheb_roots: degree must be at least 1, got " +
                            std::to_string(n));
    std::vector<double> r(n);
    const int half = n / 2;
    for (int k = 1; k <= half; ++k)
        r[k - 1] = std::cos((2 * k - 1) * std::numbers::pi / (2 * n));
    if (n % 2 == 1) r[half] = 0.0;
    for (int i = 0; i < half; ++i) r[n - 1 - i] = -r[i];
    return r;
}

/// T_n(x) by the three-term recurrence. Accepts a hair of floating-point
/// overshoot beyond [-1, 1] and clamps it.
[[nodiscard]] inline double cheb_T(int n, double x) {
    if (n < 0)
        throw InvalidDegree("cheb_T: degree must be nonnegative, got " +
                            std::to_string(n));
    if (std::abs(x) > 1.0 + domain_slack)
        throw DomainError("cheb_T: argument " + std::to_string(x) +
                          " outside [-1, 1]");
    x = std::clamp(x, -1.0, 1.0);
    if (n == 0) return 1.0;
    double tm2 = 1.0, tm1 = x;
    for (int i = 2; i <= n; ++i) {
        const double t = 2.0 * x * tm1 - tm2;
        tm2 = tm1;
        tm1 = t;
    }
    return tm1;
}

/// Coefficients of the Chebyshev expansion of the m-th derivative of T_n:
/// d^m/dx^m T_n = sum over l of coeffs[l] T_l, l = 0..n-m, where the
/// coefficient is nonzero only when n + l + m is even and equals
///   prod_{i = 2-m, step 2}^{m-2} (n^2 - (l+i)^2) * n / (c_l (m-1)! 2^{m-2}).
struct DerivSeries {
    int degree = 0;  ///< n of the differentiated polynomial
    int order = 0;   ///< derivative order m
    std::vector<double> coeffs;  ///< empty when m > n
};

/// Closed-form expansion of the m-th derivative of T_n; m >= 1.
[[nodiscard]] inline DerivSeries cheb_deriv_series(int n, int m) {
    if (n < 0)
        throw InvalidDegree("cheb_deriv_series: degree must be nonnegative, got " +
                            std::to_string(n));
    if (m < 1)
        throw InvalidOrder("cheb_deriv_series: order must be at least 1, got " +
                           std::to_string(m));
    DerivSeries out{n, m, {}};
    if (m > n) return out;
    out.coeffs.assign(n - m + 1, 0.0);
    const double scale = 1.0 / (detail::factorial(m - 1) * std::ldexp(1.0, m - 2));
    for (int l = 0; l <= n - m; ++l) {
        if ((n + l + m) % 2 != 0) continue;
        double prod = 1.0;
        for (int i = 2 - m; i <= m - 2; i += 2) {
            const double li = static_cast<double>(l + i) * (l + i);
            prod *= static_cast<double>(n) * n - li;
        }
        out.coeffs[l] = prod * n / norm_c(l) * scale;
    }
    return out;
}

/// Dense collocation derivative matrix on the Gauss-Lobatto grid.
/// Row k, column j: entries(k, j) maps node values to the m-th derivative
/// of the interpolating polynomial at node k.
struct DiffMatrix {
    int degree = 0;
    int order = 0;
    std::vector<double> entries;  ///< row-major, (degree + 1)^2

    [[nodiscard]] int size() const noexcept { return degree + 1; }
    [[nodiscard]] double operator()(int k, int j) const {
        return entries[static_cast<std::size_t>(k) * (degree + 1) + j];
    }
    [[nodiscard]] double& operator()(int k, int j) {
        return entries[static_cast<std::size_t>(k) * (degree + 1) + j];
    }
};

/// m-th order differentiation matrix for the degree-N interpolant,
/// built from the closed-form derivative expansions:
///   D(k, j) = theta_j (2/N) sum_n theta_n T_n(x_j) (d^m T_n)(x_k).
[[nodiscard]] inline DiffMatrix diff_matrix(int degree, int m) {
    if (degree < 1)
        throw InvalidDegree("diff_matrix: degree must be at least 1, got " +
                            std::to_string(degree));
    if (m < 1 || m > degree)
        throw InvalidOrder("diff_matrix: order must be in [1, " +
                           std::to_string(degree) + "], got " + std::to_string(m));
    const int np = degree + 1;
    std::vector<double> tv(static_cast<std::size_t>(np) * np);
    for (int n = 0; n < np; ++n)
        for (int k = 0; k < np; ++k)
            tv[static_cast<std::size_t>(n) * np + k] = detail::node_cos(n, k, degree);

    // dtn[n][k] = (d^m T_n)(x_k), accumulated from the derivative expansions
    std::vector<double> dtn(static_cast<std::size_t>(np) * np, 0.0);
    for (int n = m; n < np; ++n) {
        const DerivSeries ds = cheb_deriv_series(n, m);
        for (int l = 0; l <= n - m; ++l) {
            const double c = ds.coeffs[l];
            if (c == 0.0) continue;
            for (int k = 0; k < np; ++k)
                dtn[static_cast<std::size_t>(n) * np + k] +=
                    c * tv[static_cast<std::size_t>(l) * np + k];
        }
    }

    DiffMatrix d{degree, m, std::vector<double>(static_cast<std::size_t>(np) * np)};
    for (int k = 0; k < np; ++k) {
        for (int j = 0; j < np; ++j) {
            double acc = 0.0;
            for (int n = m; n < np; ++n)
                acc += end_weight(n, degree) *
                       dtn[static_cast<std::size_t>(n) * np + k] *
                       tv[static_cast<std::size_t>(n) * np + j];
            d(k, j) = end_weight(j, degree) * 2.0 / degree * acc;
        }
    }
    return d;
}

/// Matrix-vector product of a differentiation matrix with node values.
[[nodiscard]] inline std::vector<double> apply_diff(const DiffMatrix& d,
                                                    std::span<const double> values) {
    if (static_cast<int>(values.size()) != d.size())
        throw ShapeError("apply_diff: expected " + std::to_string(d.size()) +
                         " values, got " + std::to_string(values.size()));
    std::vector<double> out(d.size(), 0.0);
    for (int k = 0; k < d.size(); ++k) {
        double acc = 0.0;
        for (int j = 0; j < d.size(); ++j) acc += d(k, j) * values[j];
        out[k] = acc;
    }
    return out;
}

/// Chebyshev series in the half-weighted convention: the represented
/// polynomial is a[0]/2 + sum_{n=1}^{N-1} a[n] T_n + a[N]/2 T_N.
struct ChebSeries {
    int degree = 0;
    std::vector<double> a;
};

/// Discrete Chebyshev transform of values sampled on the Gauss-Lobatto
/// grid of degree N = values.size() - 1:
///   a_n = (2/N) sum_j theta_j values[j] T_n(x_j).
[[nodiscard]] inline ChebSeries cheb_coeffs(std::span<const double> values) {
    if (values.size() < 2)
        throw InvalidDegree("cheb_coeffs: need at least 2 node values, got " +
                            std::to_string(values.size()));
    const int degree = static_cast<int>(values.size()) - 1;
    ChebSeries s{degree, std::vector<double>(degree + 1, 0.0)};
    for (int n = 0; n <= degree; ++n) {
        double acc = 0.0;
        for (int j = 0; j <= degree; ++j)
            acc += end_weight(j, degree) * values[j] * detail::node_cos(n, j, degree);
        s.a[n] = 2.0 / degree * acc;
    }
    return s;
}

/// Clenshaw evaluation of a plain (unweighted) Chebyshev combination
/// sum_k coeffs[k] T_k(x). An empty coefficient list is the zero polynomial.
[[nodiscard]] inline double eval_plain(std::span<const double> coeffs, double x) {
    if (std::abs(x) > 1.0 + domain_slack)
        throw DomainError("eval_plain: argument " + std::to_string(x) +
                          " outside [-1, 1]");
    x = std::clamp(x, -1.0, 1.0);
    if (coeffs.empty()) return 0.0;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = coeffs.size() - 1; k >= 1; --k) {
        const double b0 = coeffs[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return coeffs[0] + x * b1 - b2;
}

/// Clenshaw evaluation of a half-weighted series.
[[nodiscard]] inline double series_eval(const ChebSeries& s, double x) {
    if (std::abs(x) > 1.0 + domain_slack)
        throw DomainError("series_eval: argument " + std::to_string(x) +
                          " outside [-1, 1]");
    x = std::clamp(x, -1.0, 1.0);
    double b1 = 0.0, b2 = 0.0;
    for (int k = s.degree; k >= 1; --k) {
        const double ck = s.a[k] * (k == s.degree ? 0.5 : 1.0);
        const double b0 = ck + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return 0.5 * s.a[0] + x * b1 - b2;
}

/// Plain Chebyshev coefficients of the m-th derivative of a half-weighted
/// series, assembled term by term from the closed-form expansions. The
/// result is evaluable with eval_plain; empty when m exceeds the degree.
[[nodiscard]] inline std::vector<double> series_derivative(const ChebSeries& s, int m) {
    if (m < 1)
        throw InvalidOrder("series_derivative: order must be at least 1, got " +
                           std::to_string(m));
    if (m > s.degree) return {};
    std::vector<double> out(s.degree - m + 1, 0.0);
    for (int n = m; n <= s.degree; ++n) {
        const double w = end_weight(n, s.degree) * s.a[n];
        if (w == 0.0) continue;
        const DerivSeries ds = cheb_deriv_series(n, m);
        for (int l = 0; l <= n - m; ++l) out[l] += w * ds.coeffs[l];
    }
    return out;
}

/// Monomial coefficients (ascending powers) of a half-weighted series.
/// Refused above degree 30: the Chebyshev-to-monomial change of basis
/// loses roughly one decimal digit per degree and the result would be
/// numerically meaningless.
[[nodiscard]] inline std::vector<double> series_to_monomial(const ChebSeries& s) {
    if (s.degree > 30)
        throw ConditioningError("series_to_monomial: degree " +
                                std::to_string(s.degree) +
                                " exceeds the supported maximum of 30");
    const int deg = s.degree;
    std::vector<double> out(deg + 1, 0.0);
    std::vector<double> tprev{1.0};  // T_0
    out[0] += end_weight(0, deg) * s.a[0];
    if (deg == 0) return out;
    std::vector<double> tcur{0.0, 1.0};  // T_1
    {
        const double w = end_weight(1, deg) * s.a[1];
        out[1] += w;
    }
    for (int n = 2; n <= deg; ++n) {
        std::vector<double> tnext(n + 1, 0.0);
        for (std::size_t i = 0; i < tcur.size(); ++i) tnext[i + 1] += 2.0 * tcur[i];
        for (std::size_t i = 0; i < tprev.size(); ++i) tnext[i] -= tprev[i];
        const double w = end_weight(n, deg) * s.a[n];
        for (std::size_t i = 0; i < tnext.size(); ++i) out[i] += w * tnext[i];
        tprev = std::move(tcur);
        tcur = std::move(tnext);
    }
    return out;
}

/// Monomial coefficients of p(alpha x + beta) given those of p, via a
/// Horner-style expansion.
[[nodiscard]] inline std::vector<double> compose_affine(std::span<const double> coeffs,
                                                        double alpha, double beta) {
    if (coeffs.empty()) return {};
    std::vector<double> r;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        std::vector<double> nr(r.size() + 1, 0.0);
        for (std::size_t i = 0; i < r.size(); ++i) {
            nr[i] += beta * r[i];
            nr[i + 1] += alpha * r[i];
        }
        nr[0] += coeffs[k];
        r = std::move(nr);
    }
    return r;
}

}  // namespace chebbvp
