#pragma once

#include <stdexcept>
#include <string>

namespace perr {

/// Base for every error the library raises. Validation-type errors map to
/// exit code 1 in the CLI; IoError maps to 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

class NoSolution : public Error {
public:
    using Error::Error;
};

class MalformedRecord : public Error {
public:
    using Error::Error;
};

class TooManyFailures : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Carries the offending field name, e.g. "dgp.p2".
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

/// Row numbers are 1-based over data rows (header excluded).
class RowError : public Error {
public:
    RowError(std::size_t row, const std::string& message)
        : Error("row " + std::to_string(row) + ": " + message), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

}  // namespace perr
