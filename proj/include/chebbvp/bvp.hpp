#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chebbvp/chebyshev.hpp"
#include "chebbvp/errors.hpp"
#include "chebbvp/linalg.hpp"
#include "chebbvp/newton.hpp"

namespace chebbvp {

/// Which end of the interval a boundary condition applies to.
/// left is x = a (grid index N); right is x = b (grid index 0).
enum class Endpoint { left, right };

/// One boundary condition: the deriv_order-th derivative of y with respect
/// to x takes the given value at the endpoint.
struct BoundaryCondition {
    Endpoint at = Endpoint::left;
    int deriv_order = 0;
    double value = 0.0;
};

/// Residual callback R(x, Y) with Y = (y, y', ..., y^(n)) in x units;
/// R = 0 along solutions.
using ResidualFn = std::function<double(double, std::span<const double>)>;

/// Two-point boundary value problem of order n on [a, b].
struct BvpProblem {
    int order = 0;
    double a = -1.0;
    double b = 1.0;
    ResidualFn residual;
    std::vector<BoundaryCondition> bcs;
};

/// Structural validation; throws on the first violated invariant.
inline void validate_problem(const BvpProblem& p) {
    if (p.order < 1 || p.order > 10)
        throw InvalidOrder("problem order must be in [1, 10], got " +
                           std::to_string(p.order));
    if (!(p.a < p.b) || !std::isfinite(p.a) || !std::isfinite(p.b))
        throw InvalidDomain("problem domain must satisfy a < b, got [" +
                            std::to_string(p.a) + ", " + std::to_string(p.b) + "]");
    if (!p.residual) throw InvalidProblem("problem has no residual function");
    if (static_cast<int>(p.bcs.size()) != p.order)
        throw InvalidProblem("expected " + std::to_string(p.order) +
                             " boundary conditions, got " +
                             std::to_string(p.bcs.size()));
    for (const auto& bc : p.bcs) {
        if (bc.deriv_order < 0 || bc.deriv_order >= p.order)
            throw InvalidProblem("boundary condition derivative order " +
                                 std::to_string(bc.deriv_order) +
                                 " must be in [0, " + std::to_string(p.order - 1) +
                                 "]");
        if (!std::isfinite(bc.value))
            throw InvalidProblem("boundary condition value is not finite");
    }
    for (std::size_t i = 0; i < p.bcs.size(); ++i)
        for (std::size_t j = i + 1; j < p.bcs.size(); ++j)
            if (p.bcs[i].at == p.bcs[j].at &&
                p.bcs[i].deriv_order == p.bcs[j].deriv_order)
                throw InvalidProblem(
                    "duplicate boundary condition for derivative order " +
                    std::to_string(p.bcs[i].deriv_order));
}

/// Affine map between [a, b] in x and [-1, 1] in t.
struct DomainMap {
    double a = -1.0;
    double b = 1.0;

    /// dt/dx; the m-th x-derivative is scale()^m times the t-derivative.
    [[nodiscard]] double scale() const noexcept { return 2.0 / (b - a); }
    [[nodiscard]] double to_reference(double x) const noexcept {
        return (2.0 * x - a - b) / (b - a);
    }
    [[nodiscard]] double from_reference(double t) const noexcept {
        return 0.5 * ((b - a) * t + a + b);
    }
};

/// Problem restated over t in [-1, 1]: BC targets for derivative order m
/// are divided by scale^m, and the residual accepts t-derivatives which it
/// rescales to x units before calling the original callback.
struct MappedProblem {
    BvpProblem problem;
    DomainMap map;
    std::vector<double> scale_pow;       ///< scale^0 .. scale^order
    std::vector<BoundaryCondition> bcs;  ///< values are t-space targets

    /// Residual over the reference variable; yt = (y, dy/dt, ..., d^n y/dt^n).
    [[nodiscard]] double residual(double t, std::span<const double> yt) const {
        std::vector<double> yx(yt.size());
        for (std::size_t m = 0; m < yt.size(); ++m) yx[m] = scale_pow[m] * yt[m];
        return problem.residual(map.from_reference(t), yx);
    }
};

/// Restate a problem over the reference interval.
[[nodiscard]] inline MappedProblem to_reference_domain(const BvpProblem& p) {
    if (!(p.a < p.b))
        throw InvalidDomain("to_reference_domain: domain must satisfy a < b");
    MappedProblem mp{p, DomainMap{p.a, p.b}, {}, {}};
    mp.scale_pow.assign(p.order + 1, 1.0);
    for (int m = 1; m <= p.order; ++m)
        mp.scale_pow[m] = mp.scale_pow[m - 1] * mp.map.scale();
    mp.bcs = p.bcs;
    for (auto& bc : mp.bcs) bc.value /= mp.scale_pow[bc.deriv_order];
    return mp;
}

/// Interior node indices where the differential equation is collocated:
/// k = n_R .. N - n_L, where n_R and n_L count the BCs pinned at grid
/// indices 0 and N. Together with the BC rows this yields N + 1 equations.
[[nodiscard]] inline std::vector<int> collocation_set(
    int degree, const std::vector<BoundaryCondition>& bcs) {
    const int n = static_cast<int>(bcs.size());
    if (degree + 1 - n < 1)
        throw DegreeTooSmall("collocation_set: degree " + std::to_string(degree) +
                             " leaves no collocation points for " +
                             std::to_string(n) + " boundary conditions");
    int n_right = 0;
    for (const auto& bc : bcs)
        if (bc.at == Endpoint::right) ++n_right;
    const int n_left = n - n_right;
    std::vector<int> k;
    for (int i = n_right; i <= degree - n_left; ++i) k.push_back(i);
    return k;
}

/// Precomputed collocation system for one (problem, degree) pair: grid,
/// differentiation matrices, row layout. residual() is the square map
/// fed to the Newton iteration; rows at BC node indices enforce the
/// boundary conditions in x units, the rest collocate the equation.
class CollocationSystem {
public:
    CollocationSystem(BvpProblem p, int degree)
        : p_(std::move(p)), degree_(degree) {
        validate_problem(p_);
        colloc_ = collocation_set(degree_, p_.bcs);
        map_ = DomainMap{p_.a, p_.b};
        const auto t = gauss_lobatto_nodes(degree_);
        x_.resize(t.size());
        for (std::size_t k = 0; k < t.size(); ++k) x_[k] = map_.from_reference(t[k]);
        x_.front() = p_.b;
        x_.back() = p_.a;
        scale_pow_.assign(p_.order + 1, 1.0);
        for (int m = 1; m <= p_.order; ++m)
            scale_pow_[m] = scale_pow_[m - 1] * map_.scale();
        deriv_.reserve(p_.order);
        for (int m = 1; m <= p_.order; ++m) deriv_.push_back(diff_matrix(degree_, m));
        for (const auto& bc : p_.bcs)
            (bc.at == Endpoint::right ? right_bcs_ : left_bcs_).push_back(bc);
        const auto by_order = [](const BoundaryCondition& u, const BoundaryCondition& v) {
            return u.deriv_order < v.deriv_order;
        };
        std::sort(right_bcs_.begin(), right_bcs_.end(), by_order);
        std::sort(left_bcs_.begin(), left_bcs_.end(), by_order);
    }

    /// The N+1 equation values at node values y.
    [[nodiscard]] std::vector<double> residual(std::span<const double> y) const {
        if (static_cast<int>(y.size()) != degree_ + 1)
            throw ShapeError("residual: expected " + std::to_string(degree_ + 1) +
                             " node values, got " + std::to_string(y.size()));
        std::vector<std::vector<double>> dv;
        dv.reserve(p_.order);
        for (int m = 1; m <= p_.order; ++m)
            dv.push_back(apply_diff(deriv_[m - 1], y));

        std::vector<double> out(degree_ + 1, 0.0);
        const auto bc_row = [&](const BoundaryCondition& bc, int node) {
            if (bc.deriv_order == 0) return y[node] - bc.value;
            return scale_pow_[bc.deriv_order] * dv[bc.deriv_order - 1][node] -
                   bc.value;
        };
        for (std::size_t i = 0; i < right_bcs_.size(); ++i)
            out[i] = bc_row(right_bcs_[i], 0);
        for (std::size_t i = 0; i < left_bcs_.size(); ++i)
            out[degree_ - left_bcs_.size() + 1 + i] = bc_row(left_bcs_[i], degree_);

        std::vector<double> yx(p_.order + 1);
        for (int k : colloc_) {
            yx[0] = y[k];
            for (int m = 1; m <= p_.order; ++m) yx[m] = scale_pow_[m] * dv[m - 1][k];
            out[k] = p_.residual(x_[k], yx);
        }
        for (int k = 0; k <= degree_; ++k)
            if (!std::isfinite(out[k]))
                throw EvaluationError("non-finite residual at node " +
                                      std::to_string(k));
        return out;
    }

    /// Whether perturbing the highest derivative changes the residual at
    /// any collocation node, evaluated at the given node values.
    [[nodiscard]] bool depends_on_highest(std::span<const double> y) const {
        const int n = p_.order;
        const auto dtop = apply_diff(deriv_[n - 1], y);
        std::vector<std::vector<double>> dv;
        for (int m = 1; m < n; ++m) dv.push_back(apply_diff(deriv_[m - 1], y));
        std::vector<double> yx(n + 1);
        for (int k : colloc_) {
            yx[0] = y[k];
            for (int m = 1; m < n; ++m) yx[m] = scale_pow_[m] * dv[m - 1][k];
            yx[n] = scale_pow_[n] * dtop[k];
            double r0, r1;
            try {
                r0 = p_.residual(x_[k], yx);
                const double delta = 1e-4 * (1.0 + std::abs(yx[n]));
                yx[n] += delta;
                r1 = p_.residual(x_[k], yx);
            } catch (const Error&) {
                continue;
            }
            if (std::isfinite(r0) && std::isfinite(r1) && r1 != r0) return true;
        }
        return false;
    }

    [[nodiscard]] const BvpProblem& problem() const noexcept { return p_; }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] const std::vector<double>& x_nodes() const noexcept { return x_; }
    [[nodiscard]] const std::vector<int>& collocation_indices() const noexcept {
        return colloc_;
    }

private:
    BvpProblem p_;
    int degree_;
    DomainMap map_;
    std::vector<double> x_;
    std::vector<double> scale_pow_;
    std::vector<DiffMatrix> deriv_;
    std::vector<BoundaryCondition> right_bcs_, left_bcs_;
    std::vector<int> colloc_;
};

/// One-shot assembly of the N+1 equation values for given node values.
[[nodiscard]] inline std::vector<double> assemble_residual(
    const BvpProblem& p, int degree, std::span<const double> y) {
    return CollocationSystem(p, degree).residual(y);
}

/// Starting iterate: node values of the unique polynomial of degree
/// order - 1 satisfying all boundary conditions. If that small system is
/// singular, falls back to the line through the two deriv-order-0 BC
/// values (or a constant, or zeros, as available).
[[nodiscard]] inline std::vector<double> initial_guess(const BvpProblem& p,
                                                       int degree) {
    validate_problem(p);
    const int n = p.order;
    const DomainMap map{p.a, p.b};
    const auto t = gauss_lobatto_nodes(degree);

    std::vector<BoundaryCondition> ordered = p.bcs;
    std::sort(ordered.begin(), ordered.end(),
              [](const BoundaryCondition& u, const BoundaryCondition& v) {
                  if (u.at != v.at) return u.at == Endpoint::right;
                  return u.deriv_order < v.deriv_order;
              });

    // Coefficients in t of a degree n-1 polynomial; BC rows in t units.
    Matrix a(n, n);
    std::vector<double> rhs(n, 0.0);
    double spow = 1.0;
    std::vector<double> scale_pow(n, 1.0);
    for (int m = 1; m < n; ++m) {
        spow *= map.scale();
        scale_pow[m] = spow;
    }
    for (int i = 0; i < n; ++i) {
        const auto& bc = ordered[i];
        const double te = (bc.at == Endpoint::right) ? 1.0 : -1.0;
        const int m = bc.deriv_order;
        for (int col = m; col < n; ++col) {
            double f = 1.0;
            for (int q = col; q > col - m; --q) f *= q;
            a(i, col) = f * std::pow(te, col - m);
        }
        rhs[i] = bc.value / scale_pow[m];
    }

    std::vector<double> y(degree + 1, 0.0);
    try {
        const auto coef = lu_solve(std::move(a), std::move(rhs));
        for (int k = 0; k <= degree; ++k) {
            double v = 0.0;
            for (int col = n - 1; col >= 0; --col) v = v * t[k] + coef[col];
            y[k] = v;
        }
        return y;
    } catch (const SingularMatrix&) {
    }

    bool has_left = false, has_right = false;
    double vl = 0.0, vr = 0.0;
    for (const auto& bc : p.bcs) {
        if (bc.deriv_order != 0) continue;
        if (bc.at == Endpoint::left) {
            has_left = true;
            vl = bc.value;
        } else {
            has_right = true;
            vr = bc.value;
        }
    }
    if (has_left && has_right) {
        for (int k = 0; k <= degree; ++k)
            y[k] = 0.5 * (vl + vr) + 0.5 * (vr - vl) * t[k];
    } else if (has_left || has_right) {
        std::fill(y.begin(), y.end(), has_left ? vl : vr);
    }
    return y;
}

/// Converged (or best-effort) collocation solution.
struct Solution {
    BvpProblem problem;
    int degree = 0;                   ///< N
    std::vector<double> node_values;  ///< index 0 is x = b, index N is x = a
    ChebSeries series;                ///< interpolant in the reference variable
    double a = -1.0;
    double b = 1.0;
    NewtonReport report;
};

/// Solve the problem by damped Newton on the collocation system. A failed
/// iteration is reported through Solution.report, not thrown.
[[nodiscard]] inline Solution solve_bvp(const BvpProblem& p, int degree,
                                        const NewtonOptions& opts = {}) {
    validate_problem(p);
    if (degree < p.order + 1)
        throw DegreeTooSmall("solve_bvp: degree must be at least " +
                             std::to_string(p.order + 1) + ", got " +
                             std::to_string(degree));
    const CollocationSystem sys(p, degree);
    std::vector<double> guess = initial_guess(p, degree);
    if (!sys.depends_on_highest(guess))
        throw InvalidProblem(
            "residual does not depend on the highest derivative at the initial "
            "guess");
    auto [y, rep] = newton_solve(
        [&sys](std::span<const double> v) { return sys.residual(v); },
        std::move(guess), opts);

    Solution s;
    s.problem = p;
    s.degree = degree;
    s.series = cheb_coeffs(y);
    s.node_values = std::move(y);
    s.a = p.a;
    s.b = p.b;
    s.report = rep;
    return s;
}

/// Value of the solution polynomial at x in [a, b].
[[nodiscard]] inline double eval_solution(const Solution& s, double x) {
    const DomainMap map{s.a, s.b};
    const double t = map.to_reference(x);
    if (std::abs(t) > 1.0 + domain_slack)
        throw DomainError("eval_solution: x = " + std::to_string(x) +
                          " outside [" + std::to_string(s.a) + ", " +
                          std::to_string(s.b) + "]");
    return series_eval(s.series, t);
}

/// m-th derivative of the solution polynomial at x, in x units; m = 0
/// falls back to eval_solution.
[[nodiscard]] inline double eval_solution_deriv(const Solution& s, double x,
                                                int m) {
    if (m < 0 || m > s.problem.order)
        throw InvalidOrder("eval_solution_deriv: order must be in [0, " +
                           std::to_string(s.problem.order) + "], got " +
                           std::to_string(m));
    if (m == 0) return eval_solution(s, x);
    const DomainMap map{s.a, s.b};
    const double t = map.to_reference(x);
    if (std::abs(t) > 1.0 + domain_slack)
        throw DomainError("eval_solution_deriv: x = " + std::to_string(x) +
                          " outside [" + std::to_string(s.a) + ", " +
                          std::to_string(s.b) + "]");
    const auto plain = series_derivative(s.series, m);
    double spow = 1.0;
    for (int i = 0; i < m; ++i) spow *= map.scale();
    return eval_plain(plain, t) * spow;
}

/// Monomial coefficients (ascending powers of x) of the solution composed
/// back to [a, b]. Subject to the same conditioning cap as
/// series_to_monomial.
[[nodiscard]] inline std::vector<double> solution_monomial(const Solution& s) {
    const auto in_t = series_to_monomial(s.series);
    const double alpha = 2.0 / (s.b - s.a);
    const double beta = -(s.a + s.b) / (s.b - s.a);
    return compose_affine(in_t, alpha, beta);
}

}  // namespace chebbvp
