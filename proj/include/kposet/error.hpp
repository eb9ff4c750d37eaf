#pragma once

#include <stdexcept>
#include <string>

namespace kposet {

/// Base class of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed poset spec, program text, JSON document, ...
class ParseError : public Error {
public:
    using Error::Error;
};

/// An element representation that does not belong to the poset at hand.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Bad argument or configuration (e.g. split index out of range).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A desk-scale ceiling was hit (enumeration bound, rank ceiling, ...).
class ResourceError : public Error {
public:
    using Error::Error;
};

/// A process that was promised to be monotone is not. Carries the two
/// offending values, already formatted.
class MonotonicityViolation : public Error {
public:
    MonotonicityViolation(std::string earlier, std::string later, std::string what)
        : Error(std::move(what)), earlier_(std::move(earlier)), later_(std::move(later)) {}

    const std::string& earlier() const noexcept { return earlier_; }
    const std::string& later() const noexcept { return later_; }

private:
    std::string earlier_;
    std::string later_;
};

}  // namespace kposet
