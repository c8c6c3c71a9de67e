// chebbvp: solve two-point boundary value problems by Chebyshev collocation.
//
// Subcommands:
//   bench    run the built-in benchmark problems and report errors
//   solve    solve a problem described by a JSON config file
//   diffmat  print a collocation differentiation matrix

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chebbvp/chebbvp.hpp"

namespace {

using namespace chebbvp;

/// Parse "start:stop:step" into a sample grid.
std::vector<double> parse_grid(const std::string& spec) {
    double start = 0.0, stop = 0.0, step = 0.0;
    char trailing = 0;
    const int got = std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &start, &stop,
                                &step, &trailing);
    if (got != 3)
        throw ConfigError("--grid expects start:stop:step, got '" + spec + "'");
    if (!(step > 0.0))
        throw ConfigError("--grid step must be positive, got '" + spec + "'");
    if (start > stop)
        throw ConfigError("--grid start must not exceed stop, got '" + spec + "'");
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = start + i * step;
    return g;
}

int cmd_bench(const std::string& example, std::optional<int> degree,
              const std::string& format, const std::optional<std::string>& out,
              bool dump_config) {
    if (dump_config) {
        if (example == "all") {
            std::cerr << "error: --dump-config requires --example <id>\n";
            return 2;
        }
        nlohmann::ordered_json j = builtin_config_json(example);
        if (degree) j["N"] = *degree;
        const std::string text = j.dump(2) + "\n";
        if (out) {
            std::ofstream f(*out);
            if (!f) {
                std::cerr << "error: cannot open '" << *out << "' for writing\n";
                return 2;
            }
            f << text;
        } else {
            std::cout << text;
        }
        return 0;
    }

    const std::vector<std::string> ids =
        (example == "all") ? builtin_ids() : std::vector<std::string>{example};
    const SuiteReport report = run_suite(ids, degree);

    std::ostringstream body;
    if (format == "json")
        body << suite_report_json(report).dump(2) << '\n';
    else
        write_suite_csv(body, report);
    if (out) {
        std::ofstream f(*out);
        if (!f) {
            std::cerr << "error: cannot open '" << *out << "' for writing\n";
            return 2;
        }
        f << body.str();
    } else {
        std::cout << body.str();
    }

    for (const auto& e : report.entries) {
        std::cerr << e.id << ": N=" << e.degree
                  << " max_abs_error=" << format_sig17(e.max_abs_error)
                  << " threshold=" << format_sig17(e.threshold) << ' '
                  << (e.passed ? "PASS" : "FAIL");
        if (!e.converged) std::cerr << " (solver did not converge)";
        std::cerr << '\n';
    }
    return report.all_passed ? 0 : 1;
}

int cmd_solve(const std::string& config_path, std::optional<int> degree_flag,
              const std::optional<std::string>& out, bool emit_poly,
              const std::optional<std::string>& grid_spec) {
    std::ifstream f(config_path);
    if (!f) {
        std::cerr << "error: cannot read config file '" << config_path << "'\n";
        return 2;
    }
    std::ostringstream buf;
    buf << f.rdbuf();

    const ProblemConfig cfg = parse_config(buf.str());
    const BvpProblem problem = to_problem(cfg);
    int degree = 16;
    if (cfg.degree) degree = *cfg.degree;
    if (degree_flag) degree = *degree_flag;
    if (degree < problem.order + 1) degree = problem.order + 1;

    const std::vector<double> grid =
        grid_spec ? parse_grid(*grid_spec) : std::vector<double>{};

    const Solution sol = solve_bvp(problem, degree, solver_options(cfg));

    nlohmann::ordered_json j;
    j["node_values"] = sol.node_values;
    j["cheb_coeffs"] = sol.series.a;
    j["domain"] = {sol.a, sol.b};
    j["report"] = report_json(sol.report);
    if (emit_poly) j["poly_coeffs"] = solution_monomial(sol);
    const std::string json_text = j.dump(2) + "\n";

    std::ostringstream samples;
    if (!grid.empty()) {
        samples << "x,computed\n";
        for (double x : grid)
            samples << format_sig17(x) << ',' << format_sig17(eval_solution(sol, x))
                    << '\n';
    }

    if (out) {
        std::ofstream of(*out);
        if (!of) {
            std::cerr << "error: cannot open '" << *out << "' for writing\n";
            return 2;
        }
        of << json_text;
        if (!grid.empty()) std::cout << samples.str();
    } else if (!grid.empty()) {
        std::cout << samples.str();
    } else {
        std::cout << json_text;
    }

    if (sol.report.converged) {
        std::cerr << "converged: N=" << degree << " iterations="
                  << sol.report.iterations
                  << " residual=" << format_sig17(sol.report.final_residual_norm)
                  << " stop=" << to_string(sol.report.stop) << '\n';
        return 0;
    }
    std::cerr << "did not converge: N=" << degree
              << " iterations=" << sol.report.iterations
              << " residual=" << format_sig17(sol.report.final_residual_norm)
              << " stop=" << to_string(sol.report.stop) << '\n';
    return 1;
}

int cmd_diffmat(int degree, int order) {
    const DiffMatrix d = diff_matrix(degree, order);
    for (int k = 0; k < d.size(); ++k) {
        for (int j = 0; j < d.size(); ++j) {
            if (j) std::cout << ',';
            std::cout << format_sig17(d(k, j));
        }
        std::cout << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Chebyshev collocation solver for nonlinear two-point boundary value "
        "problems"};
    app.require_subcommand(1);

    auto* bench = app.add_subcommand("bench", "Run the built-in benchmarks");
    std::string example = "all";
    bench->add_option("--example", example, "Example id (ex1..ex5) or 'all'")
        ->capture_default_str();
    std::optional<int> bench_n;
    bench->add_option("--n", bench_n, "Override the polynomial degree N");
    std::string bench_format = "csv";
    bench->add_option("--format", bench_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    std::optional<std::string> bench_out;
    bench->add_option("--out", bench_out, "Write output to this file");
    bool dump_config = false;
    bench->add_flag("--dump-config", dump_config,
                    "Print the example's JSON config instead of running it");

    auto* solve = app.add_subcommand("solve", "Solve a problem from a config file");
    std::string config_path;
    solve->add_option("--config", config_path, "JSON problem configuration")
        ->required();
    std::optional<int> solve_n;
    solve->add_option("--n", solve_n, "Override the polynomial degree N");
    std::optional<std::string> solve_out;
    solve->add_option("--out", solve_out, "Write the solution JSON to this file");
    bool emit_poly = false;
    solve->add_flag("--emit-poly", emit_poly,
                    "Include monomial coefficients on the original domain");
    std::optional<std::string> grid_spec;
    solve->add_option("--grid", grid_spec,
                      "Sample the solution on start:stop:step, CSV to stdout");

    auto* diffmat = app.add_subcommand("diffmat", "Print a differentiation matrix");
    int dm_n = 0;
    diffmat->add_option("--n", dm_n, "Polynomial degree N")->required();
    int dm_order = 0;
    diffmat->add_option("--order", dm_order, "Derivative order m")->required();
    std::string dm_format = "csv";
    diffmat->add_option("--format", dm_format, "Output format")
        ->check(CLI::IsMember({"csv"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*bench)
            return cmd_bench(example, bench_n, bench_format, bench_out, dump_config);
        if (*solve)
            return cmd_solve(config_path, solve_n, solve_out, emit_poly, grid_spec);
        if (*diffmat) return cmd_diffmat(dm_n, dm_order);
    } catch (const SingularMatrix& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const EvaluationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ShapeError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
