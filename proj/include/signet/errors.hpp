#pragma once

#include <stdexcept>
#include <string>

namespace signet {

/// Malformed config or graph file. Carries the 1-based line where parsing failed.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Structurally valid input with contents that violate a contract
/// (bad CSV header, duplicate edge, weight out of range, ...).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// State left the representable range during integration.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& msg, double t)
        : std::runtime_error(msg + " at t=" + std::to_string(t)), t_(t) {}
    double t() const { return t_; }

private:
    double t_;
};

/// NaN or Inf produced by a numeric routine.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Random generation could not satisfy its constraints.
class GenerationError : public std::runtime_error {
public:
    explicit GenerationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failure: unreadable input, unwritable output.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace signet
