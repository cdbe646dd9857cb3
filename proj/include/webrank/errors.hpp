#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace webrank {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Failure while evaluating an expression at a point (pole, log of a
/// non-positive value, transcendental node in exact mode).
class EvalError : public Error {
public:
    enum class Kind { division_by_zero, log_domain, transcendental_in_exact, singular_expansion, variable_out_of_range };

    EvalError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class ParseError : public Error {
public:
    enum class Kind { syntax, unknown_identifier, non_integer_exponent, variable_out_of_range };

    ParseError(Kind kind, std::size_t position, const std::string& message)
        : Error(message + " at position " + std::to_string(position)), kind_(kind), position_(position) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t position() const noexcept { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

/// Malformed or missing input (web-definition files, unknown family names).
class InputError : public Error {
public:
    using Error::Error;
};

/// Unknown family name or unreadable file.
class NotFoundError : public InputError {
public:
    using InputError::InputError;
};

/// An internal consistency check failed (e.g. two formulas that must agree did not).
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace webrank
