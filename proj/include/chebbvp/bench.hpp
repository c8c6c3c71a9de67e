#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chebbvp/bvp.hpp"
#include "chebbvp/config.hpp"
#include "chebbvp/errors.hpp"

namespace chebbvp {

/// A previously published error column for the same example, kept for
/// side-by-side display in reports; aligned with the example's table grid.
struct MethodColumn {
    std::string method;
    std::vector<double> errors;
};

/// One of the five built-in benchmark problems.
struct BuiltinExample {
    std::string id;
    BvpProblem problem;
    std::function<double(double)> exact;
    /// (x, absolute error) pairs of the reference implementation of this
    /// same scheme, transcribed from the published result tables.
    std::vector<std::pair<double, double>> reference_errors;
    std::vector<MethodColumn> other_methods;
    int default_degree = 0;
    double threshold = 0.0;
    NewtonOptions solver;
};

namespace detail {

struct BcDef {
    const char* at;
    int deriv;
    const char* value;
};

struct ExampleDef {
    const char* id;
    int order;
    const char* residual;
    std::vector<BcDef> bcs;
    int default_degree;
    double threshold;
    double (*exact)(double);
    std::vector<double> grid;
    std::vector<double> reference_errors;
    std::vector<MethodColumn> other_methods;
};

inline double exact_ex1(double x) { return std::sin(x); }
inline double exact_ex2(double x) { return std::log1p(x) / 6.0; }
inline double exact_ex3(double x) { return std::exp(-x); }
inline double exact_ex4(double x) { return std::exp(x) * (1.0 - x) * std::cos(x); }
inline double exact_ex5(double x) { return 2.0 / (2.0 - x) - x - 1.0; }

[[nodiscard]] inline const std::vector<ExampleDef>& example_defs() {
    static const std::vector<ExampleDef> defs = [] {
        std::vector<ExampleDef> d;
        d.push_back(ExampleDef{
            "ex1",
            4,
            "y4 - sin(x) - sin(x)^2 + y2^2",
            {{"left", 0, "0"},
             {"left", 1, "1"},
             {"right", 0, "sin(1)"},
             {"right", 1, "cos(1)"}},
            14,
            1e-9,
            &exact_ex1,
            {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
            {1.2669e-13, 7.7729e-14, 6.2561e-14, 2.5512e-13, 1.3716e-13,
             1.5559e-13, 1.6986e-13, 3.5693e-13, 4.5319e-13, 5.8797e-13,
             4.916e-13},
            {{"VIM",
              {9.5923e-14, 7.7856e-08, 2.7231e-07, 5.2489e-07, 7.7730e-07,
               9.7145e-07, 1.0502e-06, 9.6286e-07, 6.8407e-07, 2.7069e-07,
               1.5676e-13}}}});
        d.push_back(ExampleDef{
            "ex2",
            6,
            "y6 - 20*exp(-36*y0) + 40*(1+x)^(-6)",
            {{"left", 0, "0"},
             {"left", 1, "1/6"},
             {"left", 2, "-1/6"},
             {"right", 0, "ln(2)/6"},
             {"right", 1, "1/12"},
             {"right", 2, "-1/24"}},
            16,
            1e-9,
            &exact_ex2,
            {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9},
            {7.235878e-14, 2.065990e-13, 2.936120e-13, 2.937860e-13,
             2.183110e-13, 1.075670e-13, 1.088020e-14, 3.384792e-14,
             2.166322e-14},
            {{"QBSCM",
              {1.303852e-07, 5.215406e-07, 9.723008e-07, 1.329929e-06,
               1.259148e-06, 8.419156e-07, 4.023314e-07, 8.195639e-08,
               1.713634e-07}}}});
        d.push_back(ExampleDef{
            "ex3",
            6,
            "y6 - exp(x)*y0^2",
            {{"left", 0, "1"},
             {"left", 1, "-1"},
             {"left", 2, "1"},
             {"right", 0, "exp(-1)"},
             {"right", 1, "-exp(-1)"},
             {"right", 2, "exp(-1)"}},
            16,
            1e-9,
            &exact_ex3,
            {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
            {3.3e-15, 2.0e-14, 5.4e-14, 9.1e-14, 1.2e-13, 1.2e-13, 1.0e-13,
             6.3e-14, 1.6e-14, 0.0},
            {{"ADM/HPM/VIM/ITM",
              {2.4e-07, 1.4e-06, 3.3e-06, 5.2e-06, 6.2e-06, 5.8e-06, 4.1e-06,
               1.9e-06, 3.6e-07, 5.0e-10}},
             {"DJM",
              {3.1e-14, 1.9e-13, 4.8e-13, 8.0e-13, 1.0e-12, 1.0e-12, 8.1e-13,
               4.3e-13, 9.2e-13, 5.6e-14}}}});
        d.push_back(ExampleDef{
            "ex4",
            7,
            "y7 + y4 - exp(y0)*y0 - exp(x)*((12 - 4*x + "
            "(x-1)*exp(-exp(x)*(x-1)*cos(x)))*cos(x) - 8*(5+x)*sin(x))",
            {{"left", 0, "1"},
             {"left", 1, "0"},
             {"left", 2, "-2"},
             {"left", 3, "-2"},
             {"right", 0, "0"},
             {"right", 1, "-e*cos(1)"},
             {"right", 2, "2*e*(sin(1)-cos(1))"}},
            16,
            1e-8,
            &exact_ex4,
            {0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0},
            {1.04949e-12, 2.06599e-12, 1.10497e-11, 2.36455e-11, 2.11277e-11,
             1.13554e-12, 1.15951e-11, 4.8044e-12, 5.05727e-13},
            {{"RKS n=30",
              {6.4278e-11, 4.7378e-10, 5.2047e-09, 1.5281e-08, 2.4509e-08,
               2.5265e-08, 1.5563e-08, 3.2941e-09, 5.6254e-11}},
             {"RKS n=50",
              {6.4113e-11, 1.4645e-10, 1.9111e-09, 5.6158e-09, 8.8518e-09,
               9.1373e-09, 5.6666e-09, 1.0112e-09, 5.6239e-11}}}});
        d.push_back(ExampleDef{
            "ex5",
            10,
            "y10 - (14175/4)*(x + y0 + 1)^11",
            {{"left", 0, "0"},
             {"left", 1, "-1/2"},
             {"left", 2, "1/2"},
             {"left", 3, "3/4"},
             {"left", 4, "3/2"},
             {"right", 0, "0"},
             {"right", 1, "1"},
             {"right", 2, "4"},
             {"right", 3, "12"},
             {"right", 4, "48"}},
            16,
            1e-6,
            &exact_ex5,
            {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9},
            {1.335263e-11, 2.468730e-10, 8.750325e-10, 1.393045e-09,
             1.202488e-09, 5.293163e-10, 5.506837e-11, 2.995830e-11,
             4.110150e-12},
            {{"QBSCM",
              {1.322478e-06, 4.231930e-06, 1.676381e-05, 4.245341e-05,
               6.662799e-05, 6.940961e-05, 4.750490e-05, 1.643598e-05,
               2.607703e-07}},
             {"HAM",
              {3.95413e-11, 7.33317e-10, 7.33317e-09, 6.06524e-09, 7.74775e-09,
               6.56402e-09, 3.48667e-09, 9.23198e-10, 5.33521e-11}}}});
        return d;
    }();
    return defs;
}

[[nodiscard]] inline const ExampleDef& find_def(const std::string& id) {
    for (const auto& d : example_defs())
        if (id == d.id) return d;
    throw UnknownExample("unknown example id '" + id + "'");
}

}  // namespace detail

/// Identifiers of the built-in examples, in canonical order.
[[nodiscard]] inline std::vector<std::string> builtin_ids() {
    std::vector<std::string> ids;
    for (const auto& d : detail::example_defs()) ids.emplace_back(d.id);
    return ids;
}

/// The JSON problem configuration of a built-in example. This is the single
/// source of truth: builtin_problem() itself goes through this config, so
/// solving a dumped config reproduces the built-in path exactly.
[[nodiscard]] inline nlohmann::ordered_json builtin_config_json(
    const std::string& id) {
    const auto& d = detail::find_def(id);
    nlohmann::ordered_json j;
    j["order"] = d.order;
    j["domain"] = {0.0, 1.0};
    j["residual"] = d.residual;
    nlohmann::ordered_json bcs = nlohmann::ordered_json::array();
    for (const auto& bc : d.bcs) {
        nlohmann::ordered_json b;
        b["at"] = bc.at;
        b["deriv"] = bc.deriv;
        b["value"] = bc.value;
        bcs.push_back(std::move(b));
    }
    j["bcs"] = std::move(bcs);
    j["N"] = d.default_degree;
    // High-order derivative rows keep the residual norm pinned well above
    // machine epsilon, so convergence is declared on step size instead.
    j["solver"] = {{"step_tol", 1e-10}};
    return j;
}

/// Materialize a built-in example; throws UnknownExample for a bad id.
[[nodiscard]] inline BuiltinExample builtin_problem(const std::string& id) {
    const auto& d = detail::find_def(id);
    const ProblemConfig cfg = parse_config(builtin_config_json(id).dump());
    BuiltinExample ex;
    ex.id = d.id;
    ex.problem = to_problem(cfg);
    ex.exact = d.exact;
    ex.reference_errors.reserve(d.grid.size());
    for (std::size_t i = 0; i < d.grid.size(); ++i)
        ex.reference_errors.emplace_back(d.grid[i], d.reference_errors[i]);
    ex.other_methods = d.other_methods;
    ex.default_degree = cfg.degree.value_or(d.default_degree);
    ex.threshold = d.threshold;
    ex.solver = solver_options(cfg);
    return ex;
}

/// One comparison row of an error table.
struct ErrorRow {
    double x = 0.0;
    double exact = 0.0;
    double computed = 0.0;
    double abs_error = 0.0;
};

/// Solution-versus-exact comparison on a grid.
struct ErrorTable {
    std::string example_id;  ///< empty for user-defined problems
    int degree = 0;
    NewtonReport report;
    std::vector<ErrorRow> rows;
};

/// The benchmark tables' grid: 0.0, 0.1, ..., 1.0.
[[nodiscard]] inline std::vector<double> default_grid() {
    std::vector<double> g(11);
    for (int i = 0; i <= 10; ++i) g[i] = i / 10.0;
    return g;
}

/// Evaluate the solution against an exact function on a grid (the table
/// grid by default). Grid points must lie inside the problem domain.
[[nodiscard]] inline ErrorTable error_table(
    const Solution& sol, const std::function<double(double)>& exact,
    std::vector<double> grid = default_grid()) {
    ErrorTable t;
    t.degree = sol.degree;
    t.report = sol.report;
    t.rows.reserve(grid.size());
    for (double x : grid) {
        ErrorRow r;
        r.x = x;
        r.exact = exact(x);
        r.computed = eval_solution(sol, x);
        r.abs_error = std::abs(r.exact - r.computed);
        t.rows.push_back(r);
    }
    return t;
}

/// Result of benchmarking one example.
struct SuiteEntry {
    std::string id;
    int degree = 0;
    double threshold = 0.0;
    double max_abs_error = std::numeric_limits<double>::infinity();
    bool converged = false;
    bool passed = false;
    ErrorTable table;
    std::vector<std::pair<double, double>> reference_errors;
    std::vector<MethodColumn> other_methods;
};

/// Aggregated benchmark outcome.
struct SuiteReport {
    std::vector<SuiteEntry> entries;
    bool all_passed = true;
};

/// Solve the selected examples and compare against their thresholds.
/// A non-converged solve marks its entry failed without aborting the rest.
[[nodiscard]] inline SuiteReport run_suite(
    const std::vector<std::string>& ids,
    std::optional<int> degree_override = {},
    const std::optional<NewtonOptions>& opts = {},
    std::optional<double> threshold_override = {}) {
    SuiteReport report;
    for (const auto& id : ids) {
        const BuiltinExample ex = builtin_problem(id);
        SuiteEntry e;
        e.id = ex.id;
        e.degree = degree_override.value_or(ex.default_degree);
        e.threshold = threshold_override.value_or(ex.threshold);
        e.reference_errors = ex.reference_errors;
        e.other_methods = ex.other_methods;

        std::vector<double> grid;
        grid.reserve(ex.reference_errors.size());
        for (const auto& [x, err] : ex.reference_errors) grid.push_back(x);

        const Solution sol =
            solve_bvp(ex.problem, e.degree, opts.value_or(ex.solver));
        e.table = error_table(sol, ex.exact, grid);
        e.table.example_id = ex.id;
        e.converged = sol.report.converged;
        e.max_abs_error = 0.0;
        for (const auto& r : e.table.rows)
            e.max_abs_error = std::max(e.max_abs_error, r.abs_error);
        e.passed = e.converged && e.max_abs_error <= e.threshold;
        report.all_passed = report.all_passed && e.passed;
        report.entries.push_back(std::move(e));
    }
    return report;
}

/// A double rendered with 17 significant digits (value-preserving).
[[nodiscard]] inline std::string format_sig17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// CSV rendering of one error table: header x,exact,computed,abs_error.
inline void write_error_table_csv(std::ostream& os, const ErrorTable& t) {
    os << "x,exact,computed,abs_error\n";
    for (const auto& r : t.rows)
        os << format_sig17(r.x) << ',' << format_sig17(r.exact) << ','
           << format_sig17(r.computed) << ',' << format_sig17(r.abs_error)
           << '\n';
}

[[nodiscard]] inline nlohmann::ordered_json report_json(const NewtonReport& r) {
    nlohmann::ordered_json j;
    j["iterations"] = r.iterations;
    j["final_residual_norm"] = r.final_residual_norm;
    j["converged"] = r.converged;
    j["backtrack_total"] = r.backtrack_total;
    j["stop"] = to_string(r.stop);
    return j;
}

/// Machine-readable suite report, reference error columns included.
[[nodiscard]] inline nlohmann::ordered_json suite_report_json(
    const SuiteReport& report) {
    nlohmann::ordered_json j;
    j["all_passed"] = report.all_passed;
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& e : report.entries) {
        nlohmann::ordered_json je;
        je["id"] = e.id;
        je["N"] = e.degree;
        je["threshold"] = e.threshold;
        je["max_abs_error"] = e.max_abs_error;
        je["converged"] = e.converged;
        je["passed"] = e.passed;
        je["report"] = report_json(e.table.report);
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < e.table.rows.size(); ++i) {
            const auto& r = e.table.rows[i];
            nlohmann::ordered_json jr;
            jr["x"] = r.x;
            jr["exact"] = r.exact;
            jr["computed"] = r.computed;
            jr["abs_error"] = r.abs_error;
            if (i < e.reference_errors.size())
                jr["reference_error"] = e.reference_errors[i].second;
            rows.push_back(std::move(jr));
        }
        je["rows"] = std::move(rows);
        nlohmann::ordered_json methods = nlohmann::ordered_json::object();
        for (const auto& m : e.other_methods) methods[m.method] = m.errors;
        je["other_methods"] = std::move(methods);
        entries.push_back(std::move(je));
    }
    j["examples"] = std::move(entries);
    return j;
}

/// CSV rendering of the whole suite: one commented header line per example
/// followed by its table.
inline void write_suite_csv(std::ostream& os, const SuiteReport& report) {
    for (const auto& e : report.entries) {
        os << "# example=" << e.id << " N=" << e.degree
           << " converged=" << (e.converged ? 1 : 0)
           << " max_abs_error=" << format_sig17(e.max_abs_error)
           << " threshold=" << format_sig17(e.threshold)
           << " passed=" << (e.passed ? 1 : 0) << '\n';
        write_error_table_csv(os, e.table);
    }
}

}  // namespace chebbvp
