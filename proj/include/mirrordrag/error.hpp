#pragma once

#include <stdexcept>
#include <string>

namespace mirrordrag {

enum class ErrorCode {
  domain,
  derivative_unavailable,
  validation_failed,
  tolerance_not_reached,
  growth_bound_exceeded,
  extrapolation_unstable,
  grid_too_coarse,
  divergent_bandwidth,
  config,
  io,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; the code selects the C API status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mirrordrag
