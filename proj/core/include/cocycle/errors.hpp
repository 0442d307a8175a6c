#pragma once

#include <stdexcept>
#include <string>

namespace cocycle {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration / validation problems (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

// subshift & measures

struct DeadSymbolError : ConfigError {
    using ConfigError::ConfigError;
};
struct EnumerationOverflowError : ConfigError {
    using ConfigError::ConfigError;
};
struct NotCloseError : Error {
    using Error::Error;
};
struct InadmissibleWrapError : Error {
    using Error::Error;
};

// linear algebra

struct ZeroSubspaceError : Error {
    using Error::Error;
};
struct FullSpaceError : Error {
    using Error::Error;
};
struct ZeroVectorError : Error {
    using Error::Error;
};

// spectrum estimation

struct SpectralGapError : Error {
    using Error::Error;
};
struct DimensionMismatchError : Error {
    using Error::Error;
};
struct ModulusTieError : Error {
    using Error::Error;
};
struct InconsistentBlockStructureError : Error {
    using Error::Error;
};
struct AllDirectionsCollapsedError : Error {
    using Error::Error;
};
struct NoAdmissibleOrbitError : Error {
    using Error::Error;
};
struct StructureMismatchError : Error {
    using Error::Error;
};

} // namespace cocycle
