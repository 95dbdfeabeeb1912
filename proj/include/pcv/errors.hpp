#ifndef PCV_ERRORS_HPP
#define PCV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pcv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// jet arithmetic
struct DivisionNearZero : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct BudgetExhausted : Error {
    using Error::Error;
};
struct NonFiniteInput : Error {
    using Error::Error;
};

// tensor calculus
struct DegenerateMetric : Error {
    using Error::Error;
};

// structures
struct OutOfDomain : Error {
    using Error::Error;
};
struct NonpositiveAlpha : Error {
    using Error::Error;
};
struct DomainViolation : Error {
    using Error::Error;
};
struct ValidationFailure : Error {
    using Error::Error;
};

// frames and extraction
struct H2TypeUnsupported : Error {
    using Error::Error;
};
struct DegenerateH : Error {
    using Error::Error;
};
struct FrameFailure : Error {
    using Error::Error;
};
struct IllConditionedSolve : Error {
    using Error::Error;
};
struct RegimeMismatch : Error {
    using Error::Error;
};

// grids and reports
struct EmptyGridAfterExclusions : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

/// Parse failure with a 0-based character offset into the source text.
struct ParseError : Error {
    ParseError(std::size_t position, const std::string& expected, const std::string& source)
        : Error("parse error at position " + std::to_string(position) + ": expected " + expected +
                " in \"" + source + "\""),
          position(position), expected(expected) {}
    std::size_t position;
    std::string expected;
};

} // namespace pcv

#endif
