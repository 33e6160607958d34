#pragma once

#include <stdexcept>
#include <string>

namespace prefspace {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A minimal sample set does not constrain a model (coincident or collinear points).
struct DegenerateSampleError : Error {
    using Error::Error;
};

/// Model pool sampling gave up after too many consecutive degenerate draws.
struct PoolExhaustedError : Error {
    using Error::Error;
};

/// File could not be opened, read or written.
struct IoError : Error {
    using Error::Error;
};

/// File content does not match the expected schema. Message names the offending line.
struct FormatError : Error {
    using Error::Error;
};

/// Ranking metric requested on labels that contain a single class.
struct SingleClassError : Error {
    using Error::Error;
};

/// Caller violated a documented precondition.
struct InvalidArgumentError : Error {
    using Error::Error;
};

}  // namespace prefspace
