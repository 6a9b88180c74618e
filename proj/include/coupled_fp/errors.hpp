#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, bad config, empty box, bad flag.
class InputError : public Error {
public:
    using Error::Error;
};

/// A point outside the domain box of a map, or an evaluation that left the
/// domain of an elementary function (division by zero, ln of a nonpositive
/// value, non-finite output).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A caller violated an operation's precondition, e.g. passed a pair that is
/// not comparable in the direction the contraction inequality requires.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The coupled iteration produced a non-finite iterate or escaped the padded
/// domain box.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t step)
        : Error(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Expression text could not be parsed. `offset()` is a byte offset into the
/// source text.
class ParseError : public InputError {
public:
    enum class Kind { syntax, unknown_identifier, arity };

    ParseError(Kind kind, std::size_t offset, const std::string& message)
        : InputError(message + " at offset " + std::to_string(offset)),
          kind_(kind), offset_(offset), detail_(message) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t offset() const noexcept { return offset_; }
    /// The message without the offset suffix.
    const std::string& detail() const noexcept { return detail_; }

private:
    Kind kind_;
    std::size_t offset_;
    std::string detail_;
};

}  // namespace cfp
