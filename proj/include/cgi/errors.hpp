#pragma once

#include <stdexcept>
#include <string>

namespace cgi {

/// Raised when an argument violates a documented precondition.
class InvalidParameter : public std::invalid_argument {
public:
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a metric has no finite definition for the given inputs.
class UndefinedMetric : public std::domain_error {
public:
    explicit UndefinedMetric(const std::string& what) : std::domain_error(what) {}
};

/// File could not be opened, read, parsed or written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cgi
