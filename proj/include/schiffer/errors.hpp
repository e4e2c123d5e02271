#pragma once

#include <stdexcept>
#include <string>

namespace schiffer {

// Base class for all failures raised by this library. The CLI maps
// subclasses onto exit codes, so new error types should derive from one
// of the categories below rather than from Error directly.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input that no amount of computation can fix: arguments outside the
// supported ranges, malformed files, curves that fail validation.
struct InvalidInputError : Error {
    using Error::Error;
};

// Argument outside the supported numeric range of a special function.
struct DomainError : InvalidInputError {
    using InvalidInputError::InvalidInputError;
};

// Evaluation point outside the trusted region of an expansion.
struct RangeError : InvalidInputError {
    using InvalidInputError::InvalidInputError;
};

// A structural precondition of an operation does not hold.
struct PreconditionError : InvalidInputError {
    using InvalidInputError::InvalidInputError;
};

// Curve or field description failed validation on load.
struct ValidationError : InvalidInputError {
    using InvalidInputError::InvalidInputError;
};

// The configuration is degenerate: the quantity asked for is not defined
// (for example a normal count when the defining function vanishes
// identically). Mapped to its own CLI exit code.
struct DegenerateError : Error {
    using Error::Error;
};

// Curve is not regular enough for arc-length resampling.
struct RegularityError : Error {
    using Error::Error;
};

// Curvature vanishes where a center of curvature was requested.
struct FlatPointError : Error {
    using Error::Error;
};

// Curvature changes sign where a convex curve was required.
struct ConvexityError : Error {
    using Error::Error;
};

// Every sample of a trace sits below the noise floor; a sign-change
// count would be meaningless.
struct AllBelowFloorError : Error {
    using Error::Error;
};

// Sign-change counts on shrinking rings failed to stabilize.
struct UnstableCountError : Error {
    using Error::Error;
};

// A Taylor jet does not satisfy the normal-form constraints assumed by
// the vertex classifier.
struct NormalFormError : Error {
    using Error::Error;
};

// The cubic normal-form coefficient vanishes; the on-normal
// classification is not decidable from this jet.
struct FlatError : Error {
    using Error::Error;
};

} // namespace schiffer
