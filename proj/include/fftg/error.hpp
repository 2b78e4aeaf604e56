#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fftg {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  EmptyRegion,
  NoPairs,
  DegenerateHull,
  EmptyRegionMap,
  EmptyList,
  EmptyBoundary,
  RegionTouchesBorder,
  UnknownType,
  SchemaError,
  LengthMismatch,
  EmptyInput,
  EmptyDataset,
  Io,
  Config,
};

std::string_view to_string(ErrorCode code);

// Every fallible operation in the library throws this; callers that need
// totality (batch runner, refinement client) catch it at their boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fftg
