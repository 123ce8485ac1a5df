// errors.hpp - exception hierarchy; cli maps ConfigError to exit 1, NumericalError to exit 2

#pragma once

#include <stdexcept>
#include <string>

namespace atomonly {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AsymmetricFrequenciesError : ConfigError {
    AsymmetricFrequenciesError()
        : ConfigError("critical coupling is only defined for omegaA == omegaB") {}
};

struct SectorRangeError : ConfigError {
    using ConfigError::ConfigError;
};

struct DenseCapError : ConfigError {
    using ConfigError::ConfigError;
};

struct InsufficientDataError : ConfigError {
    using ConfigError::ConfigError;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : NumericalError {
    using NumericalError::NumericalError;
};

struct SingularFactorizationError : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateNullSpaceError : NumericalError {
    using NumericalError::NumericalError;
};

struct FixedPointNotFoundError : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace atomonly
