#pragma once

#include <stdexcept>
#include <string>

namespace pskq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid parameter combination (bad modulation order, out-of-regime query, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Input for which the requested quantity is undefined (e.g. the phase of 0).
struct DegenerateInput : Error {
    using Error::Error;
};

/// Region or symbol index outside its valid range.
struct IndexError : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of a function.
struct DomainError : Error {
    using Error::Error;
};

/// A numerical integral failed to reach the requested tolerance.
struct QuadratureError : Error {
    using Error::Error;
};

/// Not enough data points for a fit.
struct InsufficientData : Error {
    using Error::Error;
};

} // namespace pskq
