#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qwalk {

/// Error kinds raised across the library. Construction errors, map/generator
/// misuse, and config problems all funnel through these so the CLI can map
/// them onto exit codes.
enum class Errc {
  non_hermitian,
  negative_eigenvalue,
  trace_out_of_range,
  dimension_mismatch,
  unknown_label,
  branch_out_of_range,
  bad_indices,
  bad_probability,
  bad_rates,
  step_too_large,
  non_convergent,
  not_exponential_coherence_decay,
  unknown_name,
  syntax_error,
  schema_error,
  unit_error,
  numeric_failure,
  invalid_argument,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

  /// True for errors caused by bad user input (configs, CLI arguments)
  /// rather than numeric or internal failures.
  bool is_config_error() const noexcept {
    switch (code_) {
      case Errc::syntax_error:
      case Errc::schema_error:
      case Errc::unit_error:
      case Errc::unknown_name:
        return true;
      default:
        return false;
    }
  }

 private:
  Errc code_;
};

struct SchemaViolation {
  std::string path;
  std::string reason;
};

/// Carries every violation found in one validation pass, not just the first.
class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<SchemaViolation> violations);

  const std::vector<SchemaViolation>& violations() const noexcept {
    return violations_;
  }

 private:
  std::vector<SchemaViolation> violations_;
};

}  // namespace qwalk
