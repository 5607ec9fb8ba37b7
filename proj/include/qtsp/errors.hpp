#pragma once

#include <stdexcept>
#include <string>

namespace qtsp {

// Data/format errors (CLI exit code 2). `line` is -1 when the input has no
// useful line structure (e.g. JSON configs).
struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& msg, int line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    explicit ParseError(const std::string& msg) : std::runtime_error(msg), line(-1) {}
};

// Numeric failures (CLI exit code 3).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivergentRate : NumericError {
    using NumericError::NumericError;
};

struct StuckState : NumericError {
    using NumericError::NumericError;
};

struct UnreachableMinimum : NumericError {
    using NumericError::NumericError;
};

// Filesystem write/read failures (CLI exit code 3, path named).
struct IoError : NumericError {
    using NumericError::NumericError;
};

// Argument/precondition errors (CLI exit code 1).
struct InvalidTour : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InstanceTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace qtsp
