#pragma once

#include <stdexcept>
#include <string>

namespace vitcrypt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Image or key dimensions that do not fit together.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Malformed serialized input (PPM/PGM, CIFAR batch, key file).
class FormatError : public Error {
public:
    using Error::Error;
};

/// A sequence that was required to be a bijection on {0..n-1} but is not.
class PermutationError : public Error {
public:
    using Error::Error;
};

/// Filesystem failures.
class IoError : public Error {
public:
    using Error::Error;
};

/// Invalid numeric configuration (model shapes, resize factor, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace vitcrypt
