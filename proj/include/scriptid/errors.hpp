#pragma once

#include <stdexcept>

namespace scriptid {

// Base class for all library errors; the CLI maps these to exit code 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FileNotFound : Error { using Error::Error; };
struct UnsupportedFormat : Error { using Error::Error; };
struct CorruptImage : Error { using Error::Error; };
struct ConstantImage : Error { using Error::Error; };
struct TargetTooSmall : Error { using Error::Error; };
struct MatrixTooSmall : Error { using Error::Error; };
struct NonBinaryMatrix : Error { using Error::Error; };
struct EmptyVector : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct EmptyData : Error { using Error::Error; };
struct EmptyFrames : Error { using Error::Error; };
struct EmptyScript : Error { using Error::Error; };
struct UnknownLabel : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };
struct ModelFormatError : Error { using Error::Error; };

// Bad command-line usage; the CLI maps this to exit code 2.
struct UsageError : Error { using Error::Error; };

}  // namespace scriptid
