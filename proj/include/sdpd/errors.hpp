#pragma once

#include <stdexcept>

namespace sdpd {

// Base class for everything thrown by this library.
struct SdpdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: files, specs, dimensions. CLI exit code 2.
struct DataError : SdpdError {
  using SdpdError::SdpdError;
};

// The input was well formed but a computation failed. CLI exit code 3.
struct NumericalError : SdpdError {
  using SdpdError::SdpdError;
};

struct BadSpec : DataError {
  using DataError::DataError;
};
struct TooShort : DataError {
  using DataError::DataError;
};
struct ZeroRow : DataError {
  using DataError::DataError;
};

struct DegenerateMatrix : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateModel : NumericalError {
  using NumericalError::NumericalError;
};
struct Explosion : NumericalError {
  using NumericalError::NumericalError;
};
struct NearSingular : NumericalError {
  using NumericalError::NumericalError;
};
struct Unidentified : NumericalError {
  using NumericalError::NumericalError;
};
struct NoRealRoot : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateVariance : NumericalError {
  using NumericalError::NumericalError;
};
struct NotComputable : NumericalError {
  using NumericalError::NumericalError;
};
struct EmptySet : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace sdpd
