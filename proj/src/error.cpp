#include "qwalk/error.hpp"

#include <sstream>

namespace qwalk {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::non_hermitian: return "non_hermitian";
    case Errc::negative_eigenvalue: return "negative_eigenvalue";
    case Errc::trace_out_of_range: return "trace_out_of_range";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::unknown_label: return "unknown_label";
    case Errc::branch_out_of_range: return "branch_out_of_range";
    case Errc::bad_indices: return "bad_indices";
    case Errc::bad_probability: return "bad_probability";
    case Errc::bad_rates: return "bad_rates";
    case Errc::step_too_large: return "step_too_large";
    case Errc::non_convergent: return "non_convergent";
    case Errc::not_exponential_coherence_decay:
      return "not_exponential_coherence_decay";
    case Errc::unknown_name: return "unknown_name";
    case Errc::syntax_error: return "syntax_error";
    case Errc::schema_error: return "schema_error";
    case Errc::unit_error: return "unit_error";
    case Errc::numeric_failure: return "numeric_failure";
    case Errc::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

namespace {

std::string format_violations(const std::vector<SchemaViolation>& violations) {
  std::ostringstream out;
  out << "config has " << violations.size() << " violation"
      << (violations.size() == 1 ? "" : "s") << ":";
  for (const auto& v : violations) {
    out << "\n  " << v.path << ": " << v.reason;
  }
  return out.str();
}

}  // namespace

SchemaError::SchemaError(std::vector<SchemaViolation> violations)
    : Error(Errc::schema_error, format_violations(violations)),
      violations_(std::move(violations)) {}

}  // namespace qwalk
