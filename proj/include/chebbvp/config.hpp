#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chebbvp/bvp.hpp"
#include "chebbvp/errors.hpp"
#include "chebbvp/expr.hpp"
#include "chebbvp/newton.hpp"

namespace chebbvp {

/// One boundary condition as read from a config file; value_text keeps the
/// source form (number or constant expression).
struct ConfigBoundary {
    std::string at;
    int deriv = 0;
    std::string value_text;
    double value = 0.0;
};

/// Parsed problem configuration. Field names mirror the JSON schema:
/// order, domain, residual, bcs [{at, deriv, value}], N, solver.
struct ProblemConfig {
    int order = 0;
    double a = 0.0;
    double b = 0.0;
    std::string residual;
    std::vector<ConfigBoundary> bcs;
    std::optional<int> degree;
    std::optional<int> max_iter;
    std::optional<double> residual_tol;
    std::optional<double> step_tol;
    std::optional<double> fd_step_scale;
    std::optional<int> max_backtracks;
};

namespace detail {

[[nodiscard]] inline const nlohmann::json& require_field(const nlohmann::json& j,
                                                         const char* key) {
    const auto it = j.find(key);
    if (it == j.end())
        throw ConfigError("missing required field '" + std::string(key) + "'");
    return *it;
}

[[nodiscard]] inline int require_int(const nlohmann::json& j, const char* key) {
    const auto& v = require_field(j, key);
    if (!v.is_number_integer())
        throw ConfigError("field '" + std::string(key) + "' must be an integer");
    return v.get<int>();
}

/// Evaluate a constant expression string; any variable use is an error.
[[nodiscard]] inline double eval_constant(const std::string& src,
                                          const char* what) {
    expr::NodePtr ast;
    try {
        ast = expr::parse(src);
    } catch (const ExprError& e) {
        throw ConfigError(std::string(what) + " '" + src + "': " + e.what());
    }
    std::set<std::string> vars;
    expr::used_variables(*ast, vars);
    if (!vars.empty())
        throw ConfigError(std::string(what) + " '" + src +
                          "' must be constant, found variable '" + *vars.begin() +
                          "'");
    try {
        return expr::eval_ast(*ast, {});
    } catch (const Error& e) {
        throw ConfigError(std::string(what) + " '" + src + "': " + e.what());
    }
}

}  // namespace detail

/// Parse and validate a JSON problem configuration.
[[nodiscard]] inline ProblemConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    ProblemConfig cfg;
    cfg.order = detail::require_int(j, "order");
    if (cfg.order < 1 || cfg.order > 10)
        throw ConfigError("order must be in [1, 10], got " +
                          std::to_string(cfg.order));

    const auto& dom = detail::require_field(j, "domain");
    if (!dom.is_array() || dom.size() != 2 || !dom[0].is_number() ||
        !dom[1].is_number())
        throw ConfigError("domain must be an array of two numbers");
    cfg.a = dom[0].get<double>();
    cfg.b = dom[1].get<double>();
    if (!(cfg.a < cfg.b))
        throw ConfigError("domain must satisfy a < b, got [" +
                          std::to_string(cfg.a) + ", " + std::to_string(cfg.b) +
                          "]");

    const auto& res = detail::require_field(j, "residual");
    if (!res.is_string()) throw ConfigError("residual must be a string");
    cfg.residual = res.get<std::string>();
    expr::NodePtr ast;
    try {
        ast = expr::parse(cfg.residual);
    } catch (const ExprError& e) {
        throw ConfigError(std::string("residual: ") + e.what());
    }
    std::set<std::string> vars;
    expr::used_variables(*ast, vars);
    for (const auto& v : vars) {
        if (v == "x") continue;
        const int k = std::atoi(v.c_str() + 1);
        if (k > cfg.order)
            throw ConfigError("residual references '" + v +
                              "' but the problem order is " +
                              std::to_string(cfg.order));
    }

    const auto& bcs = detail::require_field(j, "bcs");
    if (!bcs.is_array()) throw ConfigError("bcs must be an array");
    for (const auto& b : bcs) {
        if (!b.is_object()) throw ConfigError("each bc must be an object");
        ConfigBoundary cb;
        const auto& at = detail::require_field(b, "at");
        if (!at.is_string() ||
            (at.get<std::string>() != "left" && at.get<std::string>() != "right"))
            throw ConfigError("bc field 'at' must be \"left\" or \"right\"");
        cb.at = at.get<std::string>();
        cb.deriv = detail::require_int(b, "deriv");
        const auto& val = detail::require_field(b, "value");
        if (val.is_number()) {
            cb.value = val.get<double>();
            cb.value_text = val.dump();
        } else if (val.is_string()) {
            cb.value_text = val.get<std::string>();
            cb.value = detail::eval_constant(cb.value_text, "bc value");
        } else {
            throw ConfigError("bc field 'value' must be a number or a string");
        }
        cfg.bcs.push_back(std::move(cb));
    }

    if (const auto it = j.find("N"); it != j.end()) {
        if (!it->is_number_integer())
            throw ConfigError("field 'N' must be an integer");
        cfg.degree = it->get<int>();
        if (*cfg.degree < 1)
            throw ConfigError("N must be at least 1, got " +
                              std::to_string(*cfg.degree));
    }

    if (const auto it = j.find("solver"); it != j.end()) {
        if (!it->is_object()) throw ConfigError("solver must be an object");
        const auto& s = *it;
        if (const auto f = s.find("max_iter"); f != s.end()) {
            if (!f->is_number_integer() || f->get<int>() < 1)
                throw ConfigError("solver.max_iter must be a positive integer");
            cfg.max_iter = f->get<int>();
        }
        const auto opt_pos = [&s](const char* key) -> std::optional<double> {
            const auto f = s.find(key);
            if (f == s.end()) return {};
            if (!f->is_number() || f->get<double>() <= 0.0)
                throw ConfigError(std::string("solver.") + key +
                                  " must be a positive number");
            return f->get<double>();
        };
        cfg.residual_tol = opt_pos("residual_tol");
        cfg.step_tol = opt_pos("step_tol");
        cfg.fd_step_scale = opt_pos("fd_step_scale");
        if (const auto f = s.find("max_backtracks"); f != s.end()) {
            if (!f->is_number_integer() || f->get<int>() < 0)
                throw ConfigError("solver.max_backtracks must be a nonnegative integer");
            cfg.max_backtracks = f->get<int>();
        }
    }
    return cfg;
}

/// Newton options with the config's overrides applied to the defaults.
[[nodiscard]] inline NewtonOptions solver_options(const ProblemConfig& cfg) {
    NewtonOptions o;
    if (cfg.max_iter) o.max_iter = *cfg.max_iter;
    if (cfg.residual_tol) o.residual_tol = *cfg.residual_tol;
    if (cfg.step_tol) o.step_tol = *cfg.step_tol;
    if (cfg.fd_step_scale) o.fd_step_scale = *cfg.fd_step_scale;
    if (cfg.max_backtracks) o.max_backtracks = *cfg.max_backtracks;
    return o;
}

/// Compile the configuration into a solvable problem. Structural problems
/// (BC count, derivative ranges, duplicates) surface as InvalidProblem.
[[nodiscard]] inline BvpProblem to_problem(const ProblemConfig& cfg) {
    BvpProblem p;
    p.order = cfg.order;
    p.a = cfg.a;
    p.b = cfg.b;
    expr::NodePtr ast = expr::parse(cfg.residual);
    p.residual = [ast](double x, std::span<const double> y) {
        return expr::eval_xy(*ast, x, y);
    };
    for (const auto& cb : cfg.bcs)
        p.bcs.push_back(BoundaryCondition{
            cb.at == "left" ? Endpoint::left : Endpoint::right, cb.deriv, cb.value});
    validate_problem(p);
    return p;
}

}  // namespace chebbvp
