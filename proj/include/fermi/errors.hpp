// Exception hierarchy shared by all fermi-lattice modules

#pragma once

#include <stdexcept>
#include <string>

namespace fermi {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter sets that violate a documented precondition (alpha outside (0,1), odd N, ...)
struct InvalidParameters : Error {
    using Error::Error;
};

// A solver or quadrature could not reach its tolerance.
struct NumericalFailure : Error {
    using Error::Error;
};

// Requested combination is outside what the model supports (e.g. Omega_A != Omega_B when dressing).
struct UnsupportedConfiguration : Error {
    using Error::Error;
};

struct NoRiseDetected : Error {
    using Error::Error;
};

}  // namespace fermi
