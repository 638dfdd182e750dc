#pragma once

#include <stdexcept>
#include <string>

namespace szego {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its documented domain (epsilon, k, alpha, lambda, ...).
struct InvalidParameter : Error {
  using Error::Error;
};

/// A perturbed generator produced a coefficient with modulus >= 1.
struct AdmissibilityError : Error {
  using Error::Error;
};

/// 1 - |f|^2 is not representable as a positive double.
struct DegenerateCoefficientError : Error {
  using Error::Error;
};

/// A running product acquired non-finite entries.
struct NumericalBlowupError : Error {
  using Error::Error;
};

}  // namespace szego
