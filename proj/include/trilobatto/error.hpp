#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace trilobatto {

enum class ErrorKind {
  parameter,
  precondition,
  construction_failed,
  rejected_solution,
  zero_count,
  unsupported_degree,
  division_hazard,
  indefinite_functional,
  non_gaussian_spectrum,
  node_placement,
  positivity,
  parameter_degeneracy,
  degenerate_geometry,
  verification_failed,
  classification,
  parse,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::construction_failed: return "construction_failed";
    case ErrorKind::rejected_solution: return "rejected_solution";
    case ErrorKind::zero_count: return "zero_count";
    case ErrorKind::unsupported_degree: return "unsupported_degree";
    case ErrorKind::division_hazard: return "division_hazard";
    case ErrorKind::indefinite_functional: return "indefinite_functional";
    case ErrorKind::non_gaussian_spectrum: return "non_gaussian_spectrum";
    case ErrorKind::node_placement: return "node_placement";
    case ErrorKind::positivity: return "positivity";
    case ErrorKind::parameter_degeneracy: return "parameter_degeneracy";
    case ErrorKind::degenerate_geometry: return "degenerate_geometry";
    case ErrorKind::verification_failed: return "verification_failed";
    case ErrorKind::classification: return "classification";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

/// Every failure raised by the library. `kind()` is stable and machine
/// readable; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace trilobatto
