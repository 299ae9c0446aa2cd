#pragma once

#include <stdexcept>
#include <string>

namespace stlf {

/// Malformed or inconsistent input data (bad CSV rows, gaps, non-positive loads).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Model-level failure: invalid parameters, singular regressions, failed fits.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters outside the admissible region (e.g. alpha + beta >= 1).
class ConstraintViolation : public ModelError {
public:
    using ModelError::ModelError;
};

/// Parameters were admissible but the likelihood evaluated to inf/nan.
class NonFiniteLikelihood : public ModelError {
public:
    using ModelError::ModelError;
};

}  // namespace stlf
