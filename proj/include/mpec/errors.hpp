#pragma once

#include <stdexcept>
#include <string>

namespace mpec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An evaluator produced NaN or Inf.
class NonFiniteValue : public Error {
public:
    using Error::Error;
};

/// Malformed quadratic-MPEC document, config file or multiplier file.
/// `locus` names the offending field (JSON-pointer style) or "line:column".
class ParseError : public Error {
public:
    ParseError(const std::string &locus, const std::string &what)
        : Error(locus + ": " + what), locus_(locus) {}
    const std::string &locus() const noexcept { return locus_; }

private:
    std::string locus_;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class UnknownProblem : public Error {
public:
    using Error::Error;
};

/// A configuration parameter is outside its admissible range.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Factorization failure inside a subproblem solve.
class NumericalBreakdown : public Error {
public:
    using Error::Error;
};

} // namespace mpec
