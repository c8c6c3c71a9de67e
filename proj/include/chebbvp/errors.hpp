#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chebbvp {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Polynomial degree outside the supported range, or too few samples.
class InvalidDegree : public Error {
public:
    using Error::Error;
};

/// Derivative order outside the supported range.
class InvalidOrder : public Error {
public:
    using Error::Error;
};

/// Evaluation point outside the valid domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Dimension mismatch between containers that must agree in size.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Computation refused because the result would be numerically meaningless.
class ConditioningError : public Error {
public:
    using Error::Error;
};

/// Linear system has a pivot too small to factor reliably.
class SingularMatrix : public Error {
public:
    using Error::Error;
};

/// A user-supplied callback produced a non-finite or otherwise unusable value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Domain endpoints are not an increasing pair.
class InvalidDomain : public Error {
public:
    using Error::Error;
};

/// Polynomial degree too small for the requested boundary-value problem.
class DegreeTooSmall : public Error {
public:
    using Error::Error;
};

/// Structurally invalid problem statement.
class InvalidProblem : public Error {
public:
    using Error::Error;
};

/// Unrecognized built-in example identifier.
class UnknownExample : public Error {
public:
    using Error::Error;
};

/// Invalid or inconsistent problem configuration file.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Base class for expression-language errors; carries a source position.
class ExprError : public Error {
public:
    ExprError(const std::string& msg, std::size_t pos)
        : Error(msg + " at position " + std::to_string(pos)), pos_(pos) {}

    /// 0-based character offset into the source text.
    [[nodiscard]] std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

/// Unrecognized character or malformed literal in expression source.
class LexError : public ExprError {
public:
    using ExprError::ExprError;
};

/// Token stream does not match the expression grammar.
class ParseError : public ExprError {
public:
    using ExprError::ExprError;
};

/// Unknown identifier in an expression.
class NameError : public ExprError {
public:
    using ExprError::ExprError;
};

/// Function called with the wrong number of arguments.
class ArityError : public ExprError {
public:
    using ExprError::ExprError;
};

/// Expression evaluation hit an undefined operation (division by zero, ...).
class EvalError : public Error {
public:
    using Error::Error;
};

}  // namespace chebbvp
