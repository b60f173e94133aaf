#pragma once

#include <stdexcept>
#include <string>

namespace graphdr {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated precondition (bad argument, out-of-range parameter).
struct ContractError : Error {
    using Error::Error;
};

// Operand shapes incompatible with the requested operation.
struct ShapeError : ContractError {
    using ContractError::ContractError;
};

// Iterative method failed to reach tolerance within its cap.
struct ConvergenceError : Error {
    using Error::Error;
};

// Matrix singular to working precision.
struct SingularityError : Error {
    using Error::Error;
};

// Graph (or subgraph) is not connected where connectivity is required.
struct ConnectivityError : Error {
    using Error::Error;
};

// Node with zero degree where a positive degree is required.
struct DegenerateDegreeError : Error {
    using Error::Error;
};

// Malformed on-disk data; message carries the offending line number.
struct ParseError : Error {
    using Error::Error;
};

// Training produced a non-finite loss; message names the epoch.
struct DivergenceError : Error {
    using Error::Error;
};

// Per-row bandwidth/perplexity solve failed; message names the row.
struct CalibrationError : Error {
    using Error::Error;
};

// Stratified folding impossible (class smaller than fold count).
struct StratificationError : Error {
    using Error::Error;
};

// Invalid experiment configuration.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace graphdr
