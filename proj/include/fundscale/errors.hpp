#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fundscale {

/// Root of all errors thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the data model was violated (empty message, bad phase,
/// probability outside (0,1], oracle size cap, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration (bad flag value, chunk smaller than v_max, ...).
/// CLI maps this to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A scale was requested that is undefined for the input's alphabet mode
/// (word scale over raw bytes).
class UnsupportedScaleError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// File could not be read or decoded. CLI maps this to exit code 3.
/// byte_offset() points at the first offending byte when that is known.
class IngestError : public Error {
public:
    explicit IngestError(const std::string& what, std::size_t byte_offset = npos)
        : Error(what), byte_offset_(byte_offset) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

/// A cover does not tile its message; offset() is the first bad position.
class CoverIntegrityError : public DomainError {
public:
    explicit CoverIntegrityError(const std::string& what, std::size_t offset)
        : DomainError(what), offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// An internal invariant broke. Reaching this is a bug, never user error.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace fundscale
