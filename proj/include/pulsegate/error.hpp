#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pulsegate {

enum class ErrorKind {
  invalid_range,
  grid_mismatch,
  unsupported_span,
  step_instability,
  ill_conditioned_fit,
  norm_violation,
  unphysical_decomposition,
  undefined_mode,
  no_peak,
  parse_error,
  io_error,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pulsegate
