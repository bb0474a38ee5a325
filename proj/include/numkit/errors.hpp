#pragma once

#include <stdexcept>
#include <string>

namespace numkit {

/// Base class for all numkit exceptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched shapes or lengths between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Index arrays or storage layout violate a structural invariant.
class StructureError : public Error {
public:
    using Error::Error;
};

/// Argument outside its documented domain.
class ValueError : public Error {
public:
    using Error::Error;
};

/// A user callback produced a non-finite value or failed.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// A factorization required positive definiteness and the matrix is not PD.
class NotPositiveDefiniteError : public Error {
public:
    using Error::Error;
};

/// A linear solve hit an (effectively) singular matrix.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// An iterative scheme did not reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace numkit
