#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "greenwalk/amalgam.hpp"

namespace greenwalk {

// One generator h = a o e of the contracting family at infinity: a an affine
// map moving [1:0:0], e an elementary map of polynomial degree >= 2.
struct HMember {
  AffineSyllable a;
  ElementarySyllable e;
  PlaneAutomorphism h = PlaneAutomorphism::identity();      // a o e, exact
  PlaneAutomorphism h_inv = PlaneAutomorphism::identity();  // e^{-1} o a^{-1}, exact
  int degree = 2;
};

HMember make_member(const AffineSyllable& a, const ElementarySyllable& e);

struct HFamily {
  std::vector<HMember> members;
};

enum class RegionTag { VPlus, VMinus, Ball };

// Certified constants: for every family member and every q with
// max(|x|,|y|) >= R,
//   |y| >= eps|x|  =>  h(q) stays in that cone, ||h(q)|| >= C_eps ||q||^deg h,
//                      and |log||h(q)||/deg h - log||q||| <= M_eps;
//   |x| > |y|/eps  =>  h^{-1}(q) stays in that cone.
// All comparisons used to derive them run in exact rational arithmetic over
// magnitude bounds of the complex coefficients.
struct FiltrationParams {
  Rational epsilon{1, 2};
  Rational R{2};
  Rational C_eps{1};
  Rational M_eps{1};

  double eps_d = 0.5;
  double log_R_d = 0.0;
  double log_C_d = 0.0;
  double M_d = 1.0;
  void refresh_doubles();
};

// Constructive derivation of (epsilon, R, C_eps, M_eps) for a finite family.
// Throws errc::cone_obstruction when some member's affine part fixes the
// horizontal direction at infinity (a in E), which no epsilon can repair.
FiltrationParams compute_constants(const HFamily& family);

// Exact rational re-check of every inequality behind the params; used by the
// doubling search and exposed for tests.
bool verify_constants(const HFamily& family, const Rational& epsilon, const Rational& R);

RegionTag classify_point(const ScaledPoint& q, const FiltrationParams& params);

struct StepCertificate {
  ScaledPoint next;
  bool growth_ok = false;
};

// One certified forward step. growth_ok = false means the params failed at
// runtime: a hard certification failure, not a soft warning.
StepCertificate certify_step(const HMember& member, const ScaledPoint& q,
                             const FiltrationParams& params);
// Same, but throws errc::certification_failure with a witness dump.
ScaledPoint certify_step_or_throw(const HMember& member, const ScaledPoint& q,
                                  const FiltrationParams& params);

// Deterministic samplers for Monte Carlo certification.
ScaledPoint sample_vplus(const FiltrationParams& params, std::uint64_t seed, std::uint64_t counter,
                         double log_hi);
ScaledPoint sample_vminus(const FiltrationParams& params, std::uint64_t seed,
                          std::uint64_t counter, double log_hi);

struct CertificationReport {
  long samples = 0;
  long failures = 0;
  std::string witness;  // JSON for the first failing sample, empty when clean
};

// Forward clause over V+ samples with log||q|| in [log R, log_hi].
CertificationReport certify_family_monte_carlo(const HFamily& family,
                                               const FiltrationParams& params, long samples,
                                               std::uint64_t seed, double log_hi,
                                               bool parallel = true);
// Inverse clause: members pulled back across V- samples.
CertificationReport certify_inverse_clause(const HFamily& family, const FiltrationParams& params,
                                           long samples, std::uint64_t seed, double log_hi,
                                           bool parallel = true);

}  // namespace greenwalk
