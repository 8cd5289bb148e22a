#pragma once

#include <stdexcept>
#include <string>

namespace drcn {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : Error { using Error::Error; };    // tensor / layer shape mismatch
struct ConfigError : Error { using Error::Error; };   // invalid model or run configuration
struct ParseError : Error { using Error::Error; };    // malformed file contents
struct IoError : Error { using Error::Error; };       // filesystem failures
struct ModeError : Error { using Error::Error; };     // train/infer misuse
struct NumericError : Error { using Error::Error; };  // non-finite values during training

}  // namespace drcn
