#pragma once

#include <stdexcept>
#include <string>

namespace lsb {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// A model spec or configuration violates a structural invariant.
struct SpecError : Error {
    using Error::Error;
};

/// A covariance matrix failed a positive-definiteness check.
struct NotPositiveDefiniteError : Error {
    using Error::Error;
};

/// A requested size exceeds a configured limit.
struct SizeError : Error {
    using Error::Error;
};

/// A periodogram block does not fit inside the sample.
struct BlockPlacementError : Error {
    using Error::Error;
};

/// A matrix that must be invertible is numerically rank deficient.
struct RankError : Error {
    using Error::Error;
};

/// Every candidate in a model-selection sweep failed.
struct SelectionError : Error {
    using Error::Error;
};

/// Malformed input data (CSV series, JSON specs).
struct DataError : Error {
    using Error::Error;
};

/// Evaluation at a spectral pole (zero frequency of a long-memory model).
struct PoleError : Error {
    using Error::Error;
};

}  // namespace lsb
