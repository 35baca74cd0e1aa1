#pragma once

#include <stdexcept>
#include <string>

namespace greenwalk {

enum class errc {
  non_constant_jacobian,
  not_an_automorphism,
  budget_exceeded,
  precision_loss,
  word_not_reduced,
  cone_obstruction,
  certification_failure,
  not_stabilized,
  depth_exceeded,
  orbit_escaped,
  chart_degeneracy,
  no_indeterminacy,
  config_error,
  internal_error,
};

// Single exception type; `code` drives CLI exit statuses, `witness` carries
// machine-readable failure data (JSON text) when one exists.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what, std::string witness = {})
      : std::runtime_error(what), code_(code), witness_(std::move(witness)) {}

  errc code() const { return code_; }
  const std::string& witness() const { return witness_; }

 private:
  errc code_;
  std::string witness_;
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::non_constant_jacobian: return "NonConstantJacobian";
    case errc::not_an_automorphism: return "NotAnAutomorphism";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::precision_loss: return "PrecisionLoss";
    case errc::word_not_reduced: return "WordNotReduced";
    case errc::cone_obstruction: return "ConeObstruction";
    case errc::certification_failure: return "CertificationFailure";
    case errc::not_stabilized: return "NotStabilized";
    case errc::depth_exceeded: return "DepthExceeded";
    case errc::orbit_escaped: return "OrbitEscaped";
    case errc::chart_degeneracy: return "ChartDegeneracy";
    case errc::no_indeterminacy: return "NoIndeterminacy";
    case errc::config_error: return "ConfigError";
    case errc::internal_error: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace greenwalk
