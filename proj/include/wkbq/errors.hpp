#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wkbq {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is the 0-based character offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at offset " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class SyntaxError : public ParseError {
public:
    using ParseError::ParseError;
};

class UnknownIdentifierError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Evaluation outside the real domain of an expression (pole, sqrt/log of a bad argument, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidParameterError : public Error {
public:
    using Error::Error;
};

/// Potential construction failed (family ODE, probing of an expression).
class ConstructionError : public Error {
public:
    using Error::Error;
};

class NoExactSpectrumError : public Error {
public:
    using Error::Error;
};

class LevelDoesNotExistError : public Error {
public:
    using Error::Error;
};

class NoAllowedRegionError : public Error {
public:
    using Error::Error;
};

class MultiWellError : public Error {
public:
    using Error::Error;
};

class UnboundEnergyError : public Error {
public:
    using Error::Error;
};

/// Node doubling did not converge; carries the last two estimates.
class QuadratureFailure : public Error {
public:
    QuadratureFailure(const std::string& what, double previous, double last)
        : Error(what + " (last estimates " + std::to_string(previous) + ", " + std::to_string(last) + ")"),
          previous_(previous), last_(last) {}
    double previous() const noexcept { return previous_; }
    double last() const noexcept { return last_; }

private:
    double previous_;
    double last_;
};

class LevelNotFoundError : public Error {
public:
    using Error::Error;
};

/// The first-order correction diverges and the mode has no limit law for it.
class DivergentCorrectionError : public Error {
public:
    using Error::Error;
};

class GammaUndefinedError : public Error {
public:
    using Error::Error;
};

class BoxTooSmallError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed report input (CSV parse-back) or inconsistent row width.
class ReportError : public Error {
public:
    using Error::Error;
};

}  // namespace wkbq
