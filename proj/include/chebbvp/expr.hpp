#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chebbvp/errors.hpp"

namespace chebbvp::expr {

enum class TokenKind { number, identifier, op, lparen, rparen, comma, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    std::size_t pos = 0;
};

/// Longest-match tokenizer. Numbers accept decimal and exponent notation;
/// an exponent suffix is consumed only when complete, so "2e" lexes as the
/// number 2 followed by the identifier e.
[[nodiscard]] inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    const auto is_alpha = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
            while (i < src.size() && is_digit(src[i])) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (i < src.size() && is_digit(src[i])) ++i;
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < src.size() && is_digit(src[j])) {
                    while (j < src.size() && is_digit(src[j])) ++j;
                    i = j;
                }
            }
            out.push_back({TokenKind::number,
                           std::string(src.substr(start, i - start)), start});
            continue;
        }
        if (is_alpha(c)) {
            while (i < src.size() && (is_alpha(src[i]) || is_digit(src[i]))) ++i;
            out.push_back({TokenKind::identifier,
                           std::string(src.substr(start, i - start)), start});
            continue;
        }
        if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            out.push_back({TokenKind::op, std::string(1, c), start});
            ++i;
            continue;
        }
        if (c == '(') {
            out.push_back({TokenKind::lparen, "(", start});
            ++i;
            continue;
        }
        if (c == ')') {
            out.push_back({TokenKind::rparen, ")", start});
            ++i;
            continue;
        }
        if (c == ',') {
            out.push_back({TokenKind::comma, ",", start});
            ++i;
            continue;
        }
        throw LexError("unexpected character '" + std::string(1, c) + "'", start);
    }
    return out;
}

enum class NodeKind { constant, variable, unary_neg, binary, call };

enum class FnId { sin, cos, tan, exp, ln, sqrt, abs, pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Expression tree node. Immutable after parse.
struct Node {
    NodeKind kind;
    std::size_t pos = 0;        ///< source position, for error reporting
    double value = 0.0;         ///< constant
    std::string name;           ///< variable or function name
    int var_index = -1;         ///< 0 for x, 1 + k for yk
    char op = 0;                ///< binary operator
    FnId fn = FnId::sin;        ///< call target
    std::vector<NodePtr> args;  ///< children
};

namespace detail {

struct FnInfo {
    const char* name;
    FnId id;
    int arity;
};

inline constexpr FnInfo fn_table[] = {
    {"sin", FnId::sin, 1}, {"cos", FnId::cos, 1},   {"tan", FnId::tan, 1},
    {"exp", FnId::exp, 1}, {"ln", FnId::ln, 1},     {"sqrt", FnId::sqrt, 1},
    {"abs", FnId::abs, 1}, {"pow", FnId::pow, 2},
};

[[nodiscard]] inline const FnInfo* find_fn(const std::string& name) noexcept {
    for (const auto& f : fn_table)
        if (name == f.name) return &f;
    return nullptr;
}

/// Variable index: 0 for x, 1 + k for yk with k in [0, 10]; -1 otherwise.
[[nodiscard]] inline int var_index(const std::string& name) noexcept {
    if (name == "x") return 0;
    if (name.size() < 2 || name[0] != 'y') return -1;
    if (name.size() > 3) return -1;
    for (std::size_t i = 1; i < name.size(); ++i)
        if (name[i] < '0' || name[i] > '9') return -1;
    if (name.size() == 3 && name[1] == '0') return -1;  // no leading zeros
    const int k = std::atoi(name.c_str() + 1);
    if (k > 10) return -1;
    return 1 + k;
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

    [[nodiscard]] NodePtr run() {
        NodePtr e = expr();
        if (peek().kind != TokenKind::end)
            throw ParseError("unexpected token '" + peek().text + "'", peek().pos);
        return e;
    }

private:
    const std::vector<Token>& toks_;
    std::size_t at_ = 0;
    Token end_{TokenKind::end, "", 0};

    [[nodiscard]] const Token& peek() {
        if (at_ < toks_.size()) return toks_[at_];
        end_.pos = toks_.empty() ? 0 : toks_.back().pos + toks_.back().text.size();
        return end_;
    }
    const Token& take() {
        const Token& t = peek();
        if (at_ < toks_.size()) ++at_;
        return t;
    }
    [[nodiscard]] bool at_op(const char* what) {
        const Token& t = peek();
        if (t.kind != TokenKind::op) return false;
        for (const char* c = what; *c; ++c)
            if (t.text[0] == *c) return true;
        return false;
    }

    NodePtr expr() {
        NodePtr left = term();
        while (at_op("+-")) {
            const Token t = take();
            NodePtr right = term();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::binary;
            n->pos = t.pos;
            n->op = t.text[0];
            n->args = {std::move(left), std::move(right)};
            left = std::move(n);
        }
        return left;
    }

    NodePtr term() {
        NodePtr left = unary();
        while (at_op("*/")) {
            const Token t = take();
            NodePtr right = unary();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::binary;
            n->pos = t.pos;
            n->op = t.text[0];
            n->args = {std::move(left), std::move(right)};
            left = std::move(n);
        }
        return left;
    }

    // Unary minus binds looser than '^' on its left operand: -x^2 = -(x^2).
    NodePtr unary() {
        if (at_op("-")) {
            const Token t = take();
            NodePtr child = unary();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::unary_neg;
            n->pos = t.pos;
            n->args = {std::move(child)};
            return n;
        }
        return power();
    }

    // '^' is right-associative; its right operand re-enters unary so that
    // 2^-3 and 2^3^2 parse as written.
    NodePtr power() {
        NodePtr base = primary();
        if (at_op("^")) {
            const Token t = take();
            NodePtr exponent = unary();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::binary;
            n->pos = t.pos;
            n->op = '^';
            n->args = {std::move(base), std::move(exponent)};
            return n;
        }
        return base;
    }

    NodePtr primary() {
        const Token& t = peek();
        if (t.kind == TokenKind::number) {
            take();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::constant;
            n->pos = t.pos;
            n->value = std::strtod(t.text.c_str(), nullptr);
            return n;
        }
        if (t.kind == TokenKind::identifier) {
            const Token id = take();
            if (id.text == "pi" || id.text == "e") {
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::constant;
                n->pos = id.pos;
                n->value = (id.text == "pi") ? std::numbers::pi : std::numbers::e;
                return n;
            }
            if (const FnInfo* fn = find_fn(id.text)) {
                if (peek().kind != TokenKind::lparen)
                    throw ParseError("expected '(' after function '" + id.text + "'",
                                     peek().pos);
                take();
                std::vector<NodePtr> args;
                if (peek().kind != TokenKind::rparen) {
                    args.push_back(expr());
                    while (peek().kind == TokenKind::comma) {
                        take();
                        args.push_back(expr());
                    }
                }
                if (peek().kind != TokenKind::rparen)
                    throw ParseError("expected ')' in call to '" + id.text + "'",
                                     peek().pos);
                take();
                if (static_cast<int>(args.size()) != fn->arity)
                    throw ArityError("function '" + id.text + "' takes " +
                                         std::to_string(fn->arity) +
                                         " argument(s), got " +
                                         std::to_string(args.size()),
                                     id.pos);
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::call;
                n->pos = id.pos;
                n->name = id.text;
                n->fn = fn->id;
                n->args = std::move(args);
                return n;
            }
            const int vi = var_index(id.text);
            if (vi < 0)
                throw NameError("unknown identifier '" + id.text + "'", id.pos);
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::variable;
            n->pos = id.pos;
            n->name = id.text;
            n->var_index = vi;
            return n;
        }
        if (t.kind == TokenKind::lparen) {
            take();
            NodePtr inner = expr();
            if (peek().kind != TokenKind::rparen)
                throw ParseError("expected ')'", peek().pos);
            take();
            return inner;
        }
        throw ParseError(t.kind == TokenKind::end
                             ? std::string("unexpected end of expression")
                             : "unexpected token '" + t.text + "'",
                         t.pos);
    }
};

[[nodiscard]] inline double power(double base, double ex) {
    if (base < 0.0 && ex != std::floor(ex))
        throw EvalError("negative base " + std::to_string(base) +
                        " with non-integer exponent " + std::to_string(ex));
    if (base == 0.0 && ex < 0.0)
        throw EvalError("zero raised to a negative exponent");
    return std::pow(base, ex);
}

}  // namespace detail

/// Parse a token stream into an expression tree.
[[nodiscard]] inline NodePtr parse(const std::vector<Token>& tokens) {
    return detail::Parser(tokens).run();
}

/// Tokenize and parse in one step.
[[nodiscard]] inline NodePtr parse(std::string_view src) {
    return parse(tokenize(src));
}

/// Evaluate against x and a derivative tuple Y (y0..yn); the fast path
/// used by compiled residuals.
[[nodiscard]] inline double eval_xy(const Node& n, double x,
                                    std::span<const double> y) {
    switch (n.kind) {
        case NodeKind::constant:
            return n.value;
        case NodeKind::variable:
            if (n.var_index == 0) return x;
            if (n.var_index - 1 < static_cast<int>(y.size()))
                return y[n.var_index - 1];
            throw EvalError("variable '" + n.name +
                            "' exceeds the derivative tuple length");
        case NodeKind::unary_neg:
            return -eval_xy(*n.args[0], x, y);
        case NodeKind::binary: {
            const double l = eval_xy(*n.args[0], x, y);
            const double r = eval_xy(*n.args[1], x, y);
            switch (n.op) {
                case '+': return l + r;
                case '-': return l - r;
                case '*': return l * r;
                case '/':
                    if (r == 0.0) throw EvalError("division by zero");
                    return l / r;
                case '^': return detail::power(l, r);
            }
            throw EvalError("unknown operator");
        }
        case NodeKind::call: {
            const double a0 = eval_xy(*n.args[0], x, y);
            switch (n.fn) {
                case FnId::sin: return std::sin(a0);
                case FnId::cos: return std::cos(a0);
                case FnId::tan: return std::tan(a0);
                case FnId::exp: return std::exp(a0);
                case FnId::ln:
                    if (a0 <= 0.0)
                        throw EvalError("ln of non-positive value " +
                                        std::to_string(a0));
                    return std::log(a0);
                case FnId::sqrt:
                    if (a0 < 0.0)
                        throw EvalError("sqrt of negative value " +
                                        std::to_string(a0));
                    return std::sqrt(a0);
                case FnId::abs: return std::abs(a0);
                case FnId::pow:
                    return detail::power(a0, eval_xy(*n.args[1], x, y));
            }
            throw EvalError("unknown function");
        }
    }
    throw EvalError("malformed expression tree");
}

/// Evaluate against a general variable environment.
[[nodiscard]] inline double eval_ast(const Node& n,
                                     const std::map<std::string, double>& env) {
    switch (n.kind) {
        case NodeKind::variable: {
            const auto it = env.find(n.name);
            if (it == env.end())
                throw NameError("unbound variable '" + n.name + "'", n.pos);
            return it->second;
        }
        case NodeKind::constant:
            return n.value;
        case NodeKind::unary_neg:
            return -eval_ast(*n.args[0], env);
        case NodeKind::binary: {
            const double l = eval_ast(*n.args[0], env);
            const double r = eval_ast(*n.args[1], env);
            switch (n.op) {
                case '+': return l + r;
                case '-': return l - r;
                case '*': return l * r;
                case '/':
                    if (r == 0.0) throw EvalError("division by zero");
                    return l / r;
                case '^': return detail::power(l, r);
            }
            throw EvalError("unknown operator");
        }
        case NodeKind::call: {
            // Route through eval_xy's function dispatch by evaluating
            // arguments here first.
            std::vector<double> vals;
            vals.reserve(n.args.size());
            for (const auto& a : n.args) vals.push_back(eval_ast(*a, env));
            Node wrap;
            wrap.kind = NodeKind::call;
            wrap.fn = n.fn;
            wrap.name = n.name;
            for (double v : vals) {
                auto c = std::make_shared<Node>();
                c->kind = NodeKind::constant;
                c->value = v;
                wrap.args.push_back(std::move(c));
            }
            return eval_xy(wrap, 0.0, {});
        }
    }
    throw EvalError("malformed expression tree");
}

/// Collect the variable names appearing in a tree.
inline void used_variables(const Node& n, std::set<std::string>& out) {
    if (n.kind == NodeKind::variable) out.insert(n.name);
    for (const auto& a : n.args) used_variables(*a, out);
}

namespace detail {

[[nodiscard]] inline int precedence(const Node& n) noexcept {
    switch (n.kind) {
        case NodeKind::binary:
            if (n.op == '+' || n.op == '-') return 10;
            if (n.op == '*' || n.op == '/') return 20;
            return 40;  // '^'
        case NodeKind::unary_neg:
            return 30;
        default:
            return 100;
    }
}

[[nodiscard]] inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void print_node(const Node& n, int min_prec, std::string& out) {
    const int prec = precedence(n);
    const bool wrap = prec < min_prec;
    if (wrap) out += '(';
    switch (n.kind) {
        case NodeKind::constant: {
            if (n.value < 0.0) {
                out += '(';
                out += format_number(n.value);
                out += ')';
            } else {
                out += format_number(n.value);
            }
            break;
        }
        case NodeKind::variable:
            out += n.name;
            break;
        case NodeKind::unary_neg:
            out += '-';
            print_node(*n.args[0], 30, out);
            break;
        case NodeKind::binary: {
            if (n.op == '^') {
                print_node(*n.args[0], 41, out);
                out += '^';
                print_node(*n.args[1], 30, out);
            } else {
                print_node(*n.args[0], prec, out);
                out += n.op;
                print_node(*n.args[1], prec + 1, out);
            }
            break;
        }
        case NodeKind::call: {
            out += n.name;
            out += '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i) out += ',';
                print_node(*n.args[i], 0, out);
            }
            out += ')';
            break;
        }
    }
    if (wrap) out += ')';
}

}  // namespace detail

/// Minimal-parenthesis rendering; parsing the result reproduces the tree.
[[nodiscard]] inline std::string to_string(const Node& n) {
    std::string out;
    detail::print_node(n, 0, out);
    return out;
}

/// Structural equality, with exact constant comparison.
[[nodiscard]] inline bool ast_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::constant:
            if (a.value != b.value) return false;
            break;
        case NodeKind::variable:
            if (a.name != b.name) return false;
            break;
        case NodeKind::binary:
            if (a.op != b.op) return false;
            break;
        case NodeKind::call:
            if (a.name != b.name) return false;
            break;
        case NodeKind::unary_neg:
            break;
    }
    if (a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!ast_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

}  // namespace chebbvp::expr
