#pragma once

#include <stdexcept>
#include <string>

namespace volhedge {

// Input-side failures: bad data, bad file contents, bad configuration.
// The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid numeric input (non-finite, out of domain).
class DomainError : public InputError {
public:
    using InputError::InputError;
};

// Invalid configuration (node counts, grids, flags).
class ConfigError : public InputError {
public:
    using InputError::InputError;
};

// Mismatched objects passed to one operation (e.g. a zero-vanna quote
// computed under a different realized state).
class ConsistencyError : public InputError {
public:
    using InputError::InputError;
};

// Numerical failures discovered mid-computation. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inputs on which a formula degenerates (zero vol, zero time, vanishing vega).
class DegenerateInputError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Implied-vol inversion failed; carries the violated arbitrage bound.
class InversionError : public NumericalError {
public:
    InversionError(const std::string& msg, double price, double lower, double upper)
        : NumericalError(msg), price_(price), lower_(lower), upper_(upper) {}

    double price() const { return price_; }
    double lower_bound() const { return lower_; }
    double upper_bound() const { return upper_; }

private:
    double price_;
    double lower_;
    double upper_;
};

// A scalar solve could not bracket its root.
class BracketingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A quadrature domain was not covered by the sampled data.
class CoverageError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Construction of a derived object failed (names the offending node).
class ConstructionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace volhedge
