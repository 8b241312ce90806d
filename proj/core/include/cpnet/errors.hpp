#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cpnet {

/// Base of every domain error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ValidationCode {
    CyclicStructure,
    NonTopologicalOrder,
    MissingCptRow,
    MalformedPositions,
    IndifferenceInconsistency,
};

std::string_view to_string(ValidationCode code);

class ValidationError : public Error {
public:
    ValidationError(ValidationCode code, const std::string& message)
        : Error(std::string(to_string(code)) + ": " + message), code_(code) {}
    ValidationCode code() const { return code_; }

private:
    ValidationCode code_;
};

/// Text-format error with a 1-based source location.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& message)
        : Error("SyntaxError at " + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// An enumeration (outcome space, search tree) would exceed its configured limit.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Incompatible request, e.g. penalty pruning on a net with indifference.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// M_D is undefined for identical outcomes.
class EqualOutcomes : public Error {
public:
    using Error::Error;
};

/// Two complete dominance methods answered the same query differently.
class MethodDisagreement : public Error {
public:
    using Error::Error;
};

} // namespace cpnet
