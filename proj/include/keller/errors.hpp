#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace keller {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live in different ambient dimensions (or have incompatible shapes).
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the operation's domain (negative cap, bad index, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A precondition on the input map does not hold (linear part present,
/// linear part not nilpotent, non-Keller input to a conditional check).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The linear part V'(0) is not nilpotent.
class NotNilpotent : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// A Keller-conditional check was requested on a map that is not Keller.
class NotKeller : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Requested work exceeds a configured enumeration or truncation guard.
class GuardExceeded : public Error {
public:
    using Error::Error;
};

/// An identity that must hold by construction failed: an arithmetic bug.
class InternalInconsistency : public Error {
public:
    using Error::Error;
};

/// Malformed map file; carries a 1-based line/column when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace keller
