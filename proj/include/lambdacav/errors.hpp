#pragma once

#include <stdexcept>
#include <string>

namespace lambdacav {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Admissibility failure of a parameter set (ratio mismatch, p <= 0, ...).
struct InvalidParams : Error {
    using Error::Error;
};

/// |delta| == 1: the consistent field-field coupling diverges.
struct PoleError : Error {
    using Error::Error;
};

/// The supplied field-field coupling does not decouple the first rotated mode.
struct DecouplingViolation : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

/// Coherent amplitude outside the supported photon-number range.
struct OverflowGuard : Error {
    using Error::Error;
};

/// Fixed-step integration drifted off the unit sphere.
struct StepTooLarge : Error {
    using Error::Error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace lambdacav
