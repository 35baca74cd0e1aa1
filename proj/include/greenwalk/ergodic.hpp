#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "greenwalk/filtration.hpp"
#include "greenwalk/walk.hpp"

namespace greenwalk {

// Orbit-average measure with explicit escaped mass; weights are 1/N each so
// tracked mass + escaped mass is exactly 1 in rational bookkeeping.
struct EmpiricalMeasure {
  std::vector<std::pair<std::complex<double>, std::complex<double>>> support_points;
  long escaped_from = -1;  // first orbit index certified escaped, -1 if none
  long n = 0;

  double escaped_mass() const {
    return escaped_from < 0 ? 0.0 : static_cast<double>(n - escaped_from) / n;
  }
};

// nu_N along one itinerary. Orbit points that certify into V+ stop being
// tracked and count toward escaped mass from that time on.
EmpiricalMeasure empirical_measure(const WalkPath& path, const std::complex<double>& x,
                                   const std::complex<double>& y, long n,
                                   const FiltrationParams& params);

struct LyapunovReport {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  long n_used = 0;
  long renormalizations = 0;
};

// Top and bottom exponents of the differential cocycle along a bounded orbit
// segment, with per-step norm renormalization; the bottom exponent comes
// from the smallest singular value of the renormalized product. Escaping
// orbits are out of contract (errc::orbit_escaped).
LyapunovReport lyapunov(const WalkPath& path, const std::complex<double>& x,
                        const std::complex<double>& y, long n, const FiltrationParams& params,
                        const Budget& budget = {});

enum class VolumeClass { Dissipative, Conservative, Expanding };

struct JacobianDrift {
  double drift = 0.0;
  VolumeClass classification = VolumeClass::Conservative;
};

// Exact-weight mean of log |Jac|, with exact zero detection through the
// cleared-denominator product of |Jac|^2 powers.
JacobianDrift jacobian_drift(const MeasureSpec& mu);

struct DichotomyRow {
  std::uint64_t seed = 0;
  std::complex<double> px{0.0, 0.0}, py{0.0, 0.0};
  bool escaped = false;
  long hit_time = -1;
  double max_log_norm = 0.0;  // max log sup-norm over the tracked orbit segment
};

struct DichotomyReport {
  std::vector<DichotomyRow> rows;
  long escaped_count = 0;
  double bound_radius = 0.0;  // sup norm radius covering all non-escaped segments
};

// Classifies sampled orbits as certified-escaped vs bounded-at-budget and
// reports the empirical radius of the non-escaped mass.
DichotomyReport escape_dichotomy_experiment(
    const std::shared_ptr<const MeasureSpec>& mu, const std::vector<std::uint64_t>& seeds,
    const std::vector<std::pair<std::complex<double>, std::complex<double>>>& points, long n,
    const FiltrationParams& params, bool parallel = true);

}  // namespace greenwalk
