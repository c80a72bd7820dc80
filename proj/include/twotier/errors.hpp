#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twotier {

/// Malformed input text. Carries the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a structural rule (duplicates, empty roster).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Problem too large for exhaustive enumeration.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

} // namespace twotier
