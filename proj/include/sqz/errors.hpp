#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An argument violates a documented precondition (non-finite shear,
// loss fraction outside [0,1], non-positive variance, ...).
struct InvalidParameter : Error {
    using Error::Error;
};

// A medium model is unusable: total absorption reaches or exceeds 1
// somewhere on the requested detuning grid.
struct ModelInvalid : Error {
    using Error::Error;
};

// Covariance too close to singular for a Wigner-density evaluation.
struct DegenerateState : Error {
    using Error::Error;
};

// Least-squares design matrix is rank deficient (e.g. all abscissae equal).
struct DegenerateFit : Error {
    using Error::Error;
};

// A measured noise level below what the detection chain can produce;
// the loss-correction map has no physical preimage.
struct UnphysicalObservation : Error {
    using Error::Error;
};

// Configuration file or CLI parameter problems. CLI exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

// Filesystem problems, always carrying the offending path. CLI exit code 4.
struct IoError : Error {
    using Error::Error;
};

}  // namespace sqz
