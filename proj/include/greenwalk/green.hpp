#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "greenwalk/filtration.hpp"
#include "greenwalk/walk.hpp"

namespace greenwalk {

// Normalized escape value at a point. Escaped values come with a rigorous
// tail bound; BoundedAtBudget is a statement about the horizon only
// (membership in the zero locus is semi-decidable).
struct GreenValue {
  enum class Status { Escaped, BoundedAtBudget };
  double value = 0.0;
  double error_bound = 0.0;
  Status status = Status::BoundedAtBudget;
  long hit_time = -1;  // first certified entry into V+
  int k_used = 0;      // contracting factors consumed
  long budget = 0;
  std::complex<double> px{0.0, 0.0}, py{0.0, 0.0};  // original coordinates
};

// Stable contracting sequence extracted from a prefix table: an optional
// innermost affine followed by the family members h_1, h_2, ... applied in
// that order.
struct StablePrefix {
  std::optional<AffineSyllable> leading_affine;
  std::vector<HMember> factors;

  static StablePrefix from_table(const PrefixTable& table);
  // Distinct (a,e) pairs as a filtration family (deduplicated).
  HFamily family() const;
};

struct USequenceResult {
  double u = 0.0;
  int k = 0;
  double err = 0.0;
  bool escaped = false;
  long hit_time = -1;
};

// Runs q through h_1, h_2, ...; once the orbit certifies into V+ the partial
// normalized logs form a Cauchy sequence with geometric tail M_eps / d^k,
// and iteration stops when the tail bound drops below tol.
USequenceResult u_sequence(const std::vector<HMember>& factors, const ScaledPoint& q,
                           const FiltrationParams& params, double tol, long budget);

// Green value along the stable prefix of a walk. The caller provides a table
// deep enough for tol (extend the scan horizon otherwise).
GreenValue green_evaluate(const StablePrefix& prefix, const FiltrationParams& params,
                          const ScaledPoint& q, double tol, long budget);

// Direct normalized value (1/deg f^n) log+ ||f^n(q)|| evaluated syllable by
// syllable; the cross-check path against green_evaluate.
double direct_normalized_log(const AmalgamWord& word, const ScaledPoint& q);

// Escape-time computation for a single loxodromic map.
GreenValue classical_green(const PlaneAutomorphism& f, const ScaledPoint& q, double tol,
                           long budget);

// Projective point at infinity the zero locus clusters to: a^{-1}([1:0:0])
// for the leading affine a of the stable form, [1:0:0] when the form starts
// with an elementary map.
struct InfinityPoint {
  GaussianRational x, y;  // [x : y : 0], first nonzero coordinate = 1
  friend bool operator==(const InfinityPoint& a, const InfinityPoint& b) {
    return a.x == b.x && a.y == b.y;
  }
};
InfinityPoint escape_direction(const StablePrefix& prefix);
InfinityPoint affine_pullback_of_infinity(const AffineSyllable& a);

// Rectangular window in a real-2D affine slice of C^2:
// point(i,j) = origin + ((i+1/2)/nx) ex + ((j+1/2)/ny) ey on pixel centers.
struct SliceWindow {
  std::complex<double> origin_x{0.0, 0.0}, origin_y{0.0, 0.0};
  std::complex<double> ex_x{1.0, 0.0}, ex_y{0.0, 0.0};
  std::complex<double> ey_x{0.0, 0.0}, ey_y{1.0, 0.0};
  int nx = 0, ny = 0;
};

// Row-major grid, embarrassingly parallel, deterministic. Per-cell failures
// are embedded as BoundedAtBudget cells with error_bound = -1.
std::vector<GreenValue> render_slice(const StablePrefix& prefix, const FiltrationParams& params,
                                     const SliceWindow& window, double tol, long budget,
                                     bool parallel = true);

}  // namespace greenwalk
