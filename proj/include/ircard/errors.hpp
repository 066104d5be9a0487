#pragma once

#include <stdexcept>
#include <string>

namespace ircard {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Patch or network geometry that cannot be evaluated (non-positive
/// dimensions, gap below the 1 mm singular-kernel cutoff, mismatched planes).
struct InvalidGeometryError : Error {
    using Error::Error;
};

/// Precondition violation on an operation argument (non-physical
/// temperature, out-of-range distance, absurd chip parameters).
struct DomainError : Error {
    using Error::Error;
};

/// Wire frame with a bad sync byte or wrong length.
struct FramingError : Error {
    using Error::Error;
};

/// Wire frame whose checksum or CRC does not match its payload.
struct IntegrityError : Error {
    using Error::Error;
};

/// Calibration fit that is rank-deficient or fed inconsistent samples.
struct FitError : Error {
    using Error::Error;
};

/// Query for a pixel or record that has no calibration entry.
struct LookupError : Error {
    using Error::Error;
};

/// Numerical solver failure (singular system, non-convergence).
struct SolverError : Error {
    using Error::Error;
};

/// Rise map with no pixel above the detection floor.
struct NoDetectionError : Error {
    using Error::Error;
};

/// Malformed config, CSV or calibration file.
struct FormatError : Error {
    using Error::Error;
};

/// Config document that parses but violates the schema (unknown key, wrong
/// type, out-of-range value). Distinguished so the CLI can exit 2.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace ircard
