#pragma once

#include <stdexcept>
#include <string>

namespace wtb {

// Error hierarchy used across the library. Everything derives from
// wtb::Error so callers can catch the whole family at the CLI boundary.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (bridge model, config, catalog, CSV).
class ParseError : public Error {
public:
    ParseError(const std::string& file, int line, const std::string& msg)
        : Error(file + ":" + std::to_string(line) + ": " + msg),
          file_(file), line_(line) {}
    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_;
};

// A type invariant does not hold (bad frequency, non-monotone grid, ...).
class InvariantError : public Error {
public:
    using Error::Error;
};

// Query outside the domain of a field, span or table.
class DomainError : public Error {
public:
    using Error::Error;
};

// Physical-model validity violated (e.g. quasi-steady relative flow reversal).
class ValidityError : public Error {
public:
    using Error::Error;
};

// A configured resource budget would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Time integration failed (non-convergence, NaN).
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace wtb
