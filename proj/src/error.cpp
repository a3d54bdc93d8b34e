#include "pulsegate/error.hpp"

namespace pulsegate {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_range: return "invalid-range";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::unsupported_span: return "unsupported-span";
    case ErrorKind::step_instability: return "step-instability";
    case ErrorKind::ill_conditioned_fit: return "ill-conditioned-fit";
    case ErrorKind::norm_violation: return "norm-violation";
    case ErrorKind::unphysical_decomposition: return "unphysical-decomposition";
    case ErrorKind::undefined_mode: return "undefined-mode";
    case ErrorKind::no_peak: return "no-peak";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace pulsegate
