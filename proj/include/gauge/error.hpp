#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gauge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input. Carries the byte offset where the problem was noticed.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class ArityError : public Error {
public:
    using Error::Error;
};

class UnknownSymbol : public Error {
public:
    using Error::Error;
};

/// A quantifier whose body is not eventually constant in the bound variable,
/// or any other violation of the formula formation rules.
class IllFormed : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its domain.
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace gauge
