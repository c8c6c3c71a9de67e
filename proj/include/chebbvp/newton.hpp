#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "chebbvp/errors.hpp"
#include "chebbvp/linalg.hpp"

namespace chebbvp {

/// Why the Newton iteration stopped.
enum class NewtonStop {
    residual_tol,       ///< residual norm reached the requested tolerance
    step_tol,           ///< update norm fell below the step tolerance
    stalled,            ///< no damping factor produced a residual decrease
    jacobian_singular,  ///< the linearized system could not be solved
    max_iter,           ///< iteration budget exhausted
};

/// Tuning knobs of the damped Newton iteration.
struct NewtonOptions {
    int max_iter = 50;
    double residual_tol = 1e-12;
    double step_tol = 1e-14;
    double fd_step_scale = default_fd_step;
    int max_backtracks = 30;
};

/// Outcome summary of a Newton solve.
struct NewtonReport {
    int iterations = 0;        ///< accepted updates
    double final_residual_norm = std::numeric_limits<double>::infinity();
    bool converged = false;
    int backtrack_total = 0;   ///< halvings summed over all iterations
    NewtonStop stop = NewtonStop::max_iter;
};

/// Readable label for a stop reason.
[[nodiscard]] inline const char* to_string(NewtonStop s) noexcept {
    switch (s) {
        case NewtonStop::residual_tol: return "residual_tol";
        case NewtonStop::step_tol: return "step_tol";
        case NewtonStop::stalled: return "stalled";
        case NewtonStop::jacobian_singular: return "jacobian_singular";
        case NewtonStop::max_iter: return "max_iter";
    }
    return "unknown";
}

/// Damped Newton iteration with finite-difference Jacobians on a square
/// system f: R^d -> R^d. Each step solves J delta = -f(y) and accepts the
/// first damped update y + alpha delta (alpha = 1, 1/2, 1/4, ...) that
/// strictly decreases the residual max-norm. When the full step is already
/// below step_tol the iterate is polished with it once (if that helps) and
/// the iteration reports convergence by step size. The iteration is fully
/// deterministic: same inputs, same result, bit for bit.
template <class Fn>
[[nodiscard]] std::pair<std::vector<double>, NewtonReport> newton_solve(
    Fn&& f, std::vector<double> y, const NewtonOptions& opts = {}) {
    if (opts.max_iter < 1)
        throw Error("newton_solve: max_iter must be at least 1, got " +
                    std::to_string(opts.max_iter));
    if (opts.residual_tol <= 0.0 || opts.step_tol <= 0.0 || opts.fd_step_scale <= 0.0)
        throw Error("newton_solve: tolerances and step scale must be positive");
    if (opts.max_backtracks < 0)
        throw Error("newton_solve: max_backtracks must be nonnegative, got " +
                    std::to_string(opts.max_backtracks));

    const auto res_norm = [](const std::vector<double>& fv) {
        double m = 0.0;
        for (double e : fv) {
            if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
            m = std::max(m, std::abs(e));
        }
        return m;
    };

    NewtonReport rep;
    std::vector<double> fy = f(y);
    if (fy.size() != y.size())
        throw ShapeError("newton_solve: system is not square (" +
                         std::to_string(fy.size()) + " equations, " +
                         std::to_string(y.size()) + " unknowns)");
    double res = res_norm(fy);

    for (int it = 0; it < opts.max_iter; ++it) {
        if (res <= opts.residual_tol) {
            rep.converged = true;
            rep.stop = NewtonStop::residual_tol;
            break;
        }
        Matrix jac = fd_jacobian(f, y, opts.fd_step_scale);
        std::vector<double> rhs(fy.size());
        for (std::size_t i = 0; i < fy.size(); ++i) rhs[i] = -fy[i];
        std::vector<double> delta;
        try {
            delta = lu_solve(std::move(jac), std::move(rhs));
        } catch (const SingularMatrix&) {
            rep.stop = NewtonStop::jacobian_singular;
            break;
        }

        // Trial evaluation treats any library error as a rejected point.
        const auto try_point = [&](const std::vector<double>& p,
                                   std::vector<double>& out_f) {
            try {
                out_f = f(p);
                return res_norm(out_f);
            } catch (const Error&) {
                return std::numeric_limits<double>::infinity();
            }
        };

        if (norm_inf(delta) <= opts.step_tol) {
            std::vector<double> trial(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) trial[i] = y[i] + delta[i];
            std::vector<double> tf;
            const double tn = try_point(trial, tf);
            if (tn < res) {
                y = std::move(trial);
                fy = std::move(tf);
                res = tn;
                ++rep.iterations;
            }
            rep.converged = true;
            rep.stop = NewtonStop::step_tol;
            break;
        }

        double alpha = 1.0;
        int halvings = 0;
        bool accepted = false;
        while (true) {
            std::vector<double> trial(y.size());
            for (std::size_t i = 0; i < y.size(); ++i)
                trial[i] = y[i] + alpha * delta[i];
            std::vector<double> tf;
            const double tn = try_point(trial, tf);
            if (tn < res) {
                y = std::move(trial);
                fy = std::move(tf);
                res = tn;
                accepted = true;
                break;
            }
            if (halvings == opts.max_backtracks) break;
            alpha *= 0.5;
            ++halvings;
        }
        rep.backtrack_total += halvings;
        if (!accepted) {
            rep.stop = NewtonStop::stalled;
            break;
        }
        ++rep.iterations;
    }

    if (!rep.converged && res <= opts.residual_tol) {
        rep.converged = true;
        rep.stop = NewtonStop::residual_tol;
    }
    rep.final_residual_norm = res;
    return {std::move(y), rep};
}

}  // namespace chebbvp
