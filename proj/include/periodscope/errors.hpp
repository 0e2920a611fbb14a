// Error types thrown across the library. The CLI maps these onto exit codes:
// parse errors -> 2, hypothesis violations -> 3, numerical failures -> 4.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pscope {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Syntax error from the expression parser, with the byte offset of the
// offending token and a description of what was expected there.
struct ParseError : Error {
    ParseError(std::size_t off, std::string expected_set, const std::string& msg)
        : Error(msg), offset(off), expected(std::move(expected_set)) {}
    std::size_t offset;
    std::string expected;
};

struct UnknownIdentifier : ParseError {
    using ParseError::ParseError;
};

// Evaluation outside the natural domain of an expression (sqrt of a
// negative, ln of a nonpositive, division by zero, ...).
struct DomainError : Error {
    using Error::Error;
};

struct CenterHypothesisViolated : Error {
    using Error::Error;
};

struct EnergyOutOfRange : Error {
    using Error::Error;
};

struct QuadratureNonConvergence : Error {
    using Error::Error;
};

struct InversionFailure : Error {
    using Error::Error;
};

struct IntegrationFailure : Error {
    using Error::Error;
};

struct DegenerateCritical : Error {
    using Error::Error;
};

struct GuardViolation : Error {
    using Error::Error;
};

struct NotConservative : Error {
    using Error::Error;
};

struct NotEven : Error {
    using Error::Error;
};

struct NotPositive : Error {
    using Error::Error;
};

}  // namespace pscope
