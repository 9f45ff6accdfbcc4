#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mwsense {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Failure while parsing any of the text formats. Carries the 1-based line
/// number of the offending line; what() is prefixed with it.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace mwsense
