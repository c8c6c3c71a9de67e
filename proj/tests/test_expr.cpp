#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chebbvp/expr.hpp"
#include "oracles.hpp"

using namespace chebbvp;
namespace ex = chebbvp::expr;

namespace {

double eval_str(const std::string& src, double x = 0.0,
                const std::vector<double>& y = {}) {
    return ex::eval_xy(*ex::parse(src), x, y);
}

// The built-in benchmark residuals, repeated here verbatim so the DSL tests
// stand on their own.
const char* const kResidualStrings[] = {
    "y4 - sin(x) - sin(x)^2 + y2^2",
    "y6 - 20*exp(-36*y0) + 40*(1+x)^(-6)",
    "y6 - exp(x)*y0^2",
    "y7 + y4 - exp(y0)*y0 - exp(x)*((12 - 4*x + "
    "(x-1)*exp(-exp(x)*(x-1)*cos(x)))*cos(x) - 8*(5+x)*sin(x))",
    "y10 - (14175/4)*(x + y0 + 1)^11",
};
const int kResidualOrders[] = {4, 6, 6, 7, 10};

}  // namespace

TEST_CASE("tokenizer splits on longest match") {
    const auto t1 = ex::tokenize("2*x");
    REQUIRE(t1.size() == 3);
    CHECK(t1[0].kind == ex::TokenKind::number);
    CHECK(t1[0].text == "2");
    CHECK(t1[1].kind == ex::TokenKind::op);
    CHECK(t1[2].kind == ex::TokenKind::identifier);
    CHECK(t1[2].text == "x");

    const auto t2 = ex::tokenize("sin(x)^2");
    REQUIRE(t2.size() == 6);
    CHECK(t2[0].text == "sin");
    CHECK(t2[1].kind == ex::TokenKind::lparen);
    CHECK(t2[4].text == "^");
    CHECK(t2[5].kind == ex::TokenKind::number);
    CHECK(t2[5].text == "2");

    const auto t3 = ex::tokenize("y10 1.5e-3 .5");
    REQUIRE(t3.size() == 3);
    CHECK(t3[0].text == "y10");
    CHECK(t3[1].text == "1.5e-3");
    CHECK(t3[2].text == ".5");

    // An incomplete exponent is not part of the number.
    const auto t4 = ex::tokenize("2e");
    REQUIRE(t4.size() == 2);
    CHECK(t4[0].text == "2");
    CHECK(t4[1].text == "e");
}

TEST_CASE("tokenizer reports bad characters with their position") {
    try {
        (void)ex::tokenize("2 @ 3");
        FAIL("expected LexError");
    } catch (const LexError& e) {
        CHECK(e.position() == 2);
        CHECK(std::string(e.what()).find("position 2") != std::string::npos);
    }
}

TEST_CASE("parser builds the expected tree shapes") {
    const auto top = ex::parse(kResidualStrings[0]);
    CHECK(top->kind == ex::NodeKind::binary);
    CHECK(top->op == '+');

    CHECK(ex::parse("x")->kind == ex::NodeKind::variable);
    CHECK(ex::parse("3.5")->kind == ex::NodeKind::constant);
    CHECK(ex::parse("pi")->value == std::numbers::pi);
    CHECK(ex::parse("e")->value == std::numbers::e);
}

TEST_CASE("operator precedence and associativity") {
    CHECK(eval_str("2*3+4") == 10.0);
    CHECK(eval_str("2+3*4") == 14.0);
    CHECK(eval_str("-x^2", 2.0) == -4.0);
    CHECK(eval_str("(-x)^2", 3.0) == 9.0);
    CHECK(eval_str("2^3^2") == 512.0);
    CHECK(eval_str("2^-3") == 0.125);
    CHECK(eval_str("8/4/2") == 1.0);
    CHECK(eval_str("8-4-2") == 2.0);
    CHECK(eval_str("--5") == 5.0);
    CHECK(eval_str("pow(2, 10)") == 1024.0);
    CHECK(eval_str("exp(x)*(1-x)*cos(x)", 0.0) == 1.0);
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(ex::parse("2x"), ParseError);
    CHECK_THROWS_AS(ex::parse("(x"), ParseError);
    CHECK_THROWS_AS(ex::parse("x+"), ParseError);
    CHECK_THROWS_AS(ex::parse(""), ParseError);
    CHECK_THROWS_AS(ex::parse("sin x"), ParseError);
    CHECK_THROWS_AS(ex::parse("x (1)"), ParseError);
    CHECK_THROWS_AS(ex::parse("sin(x, 1)"), ArityError);
    CHECK_THROWS_AS(ex::parse("pow(x)"), ArityError);
    CHECK_THROWS_AS(ex::parse("foo(1)"), NameError);
    CHECK_THROWS_AS(ex::parse("zebra"), NameError);
    CHECK_THROWS_AS(ex::parse("y11"), NameError);
    CHECK_THROWS_AS(ex::parse("y01"), NameError);
}

TEST_CASE("evaluation reports domain faults") {
    CHECK_THROWS_AS(eval_str("ln(0)"), EvalError);
    CHECK_THROWS_AS(eval_str("ln(x-1)", 0.5), EvalError);
    CHECK_THROWS_AS(eval_str("sqrt(-1)"), EvalError);
    CHECK_THROWS_AS(eval_str("1/(x-1)", 1.0), EvalError);
    CHECK_THROWS_AS(eval_str("(-2)^0.5"), EvalError);
    CHECK_THROWS_AS(eval_str("0^-1"), EvalError);
    CHECK_THROWS_AS(eval_str("y3", 0.0, {1.0, 2.0}), EvalError);
    CHECK(eval_str("y1", 0.0, {1.0, 2.0}) == 2.0);
}

TEST_CASE("eval_ast resolves names through the environment") {
    const auto ast = ex::parse("x + y0*sin(x)");
    std::map<std::string, double> env{{"x", 0.0}, {"y0", 7.0}};
    CHECK(ex::eval_ast(*ast, env) == 0.0);
    env["x"] = 2.0;
    CHECK(ex::eval_ast(*ast, env) ==
          Catch::Approx(2.0 + 7.0 * std::sin(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(ex::eval_ast(*ast, {{"x", 1.0}}), NameError);
}

TEST_CASE("used_variables collects each referenced name") {
    std::set<std::string> vars;
    ex::used_variables(*ex::parse(kResidualStrings[0]), vars);
    CHECK(vars == std::set<std::string>{"x", "y2", "y4"});
    vars.clear();
    ex::used_variables(*ex::parse("1 + 2"), vars);
    CHECK(vars.empty());
}

TEST_CASE("printing roundtrips through the parser") {
    std::vector<std::string> sources(std::begin(kResidualStrings),
                                     std::end(kResidualStrings));
    sources.insert(sources.end(),
                   {"-x^2", "(-x)^2", "2^3^2", "2^-3", "-(x+1)", "x-(1-x)",
                    "1-x-2", "x/(2*x)/3", "pow(x,2)", "sin(cos(exp(x)))",
                    "-4", "x*(-4)", "pi*e", "abs(x)/tan(x)", "--x"});
    for (const auto& src : sources) {
        const auto ast = ex::parse(src);
        const std::string printed = ex::to_string(*ast);
        const auto reparsed = ex::parse(printed);
        INFO("source: " << src << "  printed: " << printed);
        CHECK(ex::ast_equal(*ast, *reparsed));
    }
}

TEST_CASE("fuzzed inputs either parse or raise ExprError") {
    std::mt19937 rng(20240817u);
    const std::string charset = "xy0123456789+-*/^(), .esincoqrtabplw";
    std::uniform_int_distribution<std::size_t> pick(0, charset.size() - 1);
    std::uniform_int_distribution<int> len(1, 12);
    int parsed_ok = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::string s;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) s += charset[pick(rng)];
        try {
            const auto ast = ex::parse(s);
            ++parsed_ok;
            try {
                (void)ex::eval_xy(*ast, 0.5, std::vector<double>(11, 0.25));
            } catch (const EvalError&) {
            }
        } catch (const ExprError&) {
        }
    }
    // Mostly garbage, but the generator should produce some valid hits.
    CHECK(parsed_ok > 0);
}

TEST_CASE("benchmark residual strings vanish on their exact solutions") {
    std::mt19937 rng(7001u);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int exi = 1; exi <= 5; ++exi) {
        const auto ast = ex::parse(kResidualStrings[exi - 1]);
        const int order = kResidualOrders[exi - 1];
        for (int trial = 0; trial < 20; ++trial) {
            const double x = ux(rng);
            std::vector<double> y(order + 1);
            for (int m = 0; m <= order; ++m) y[m] = oracle::exact_deriv(exi, x, m);
            const double r = ex::eval_xy(*ast, x, y);
            INFO("example " << exi << " at x = " << x);
            CHECK(std::abs(r) <= 1e-12 * std::max(1.0, std::abs(y[order])));
        }
    }
}
