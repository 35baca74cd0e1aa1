#include "greenwalk/ergodic.hpp"

#include <cmath>

#include "greenwalk/parallel.hpp"

namespace greenwalk {

EmpiricalMeasure empirical_measure(const WalkPath& path, const std::complex<double>& x,
                                   const std::complex<double>& y, long n,
                                   const FiltrationParams& params) {
  if (n < 1) throw error(errc::config_error, "empirical measure needs n >= 1");
  EmpiricalMeasure out;
  out.n = n;
  std::vector<PlaneAutomorphism> atoms;
  for (const auto& a : path.measure().atoms) atoms.push_back(compose_word(a.word));
  ScaledPoint q = make_scaled(x, y);
  for (long i = 0; i < n; ++i) {
    if (classify_point(q, params) == RegionTag::VPlus) {
      out.escaped_from = i;
      break;
    }
    auto [cx, cy] = point_value(q);
    out.support_points.emplace_back(cx, cy);
    q = eval_scaled(atoms[static_cast<size_t>(path.atom_index(i))], q);
  }
  return out;
}

namespace {

struct Matrix2 {
  std::complex<double> a, b, c, d;
};

Matrix2 mul(const Matrix2& L, const Matrix2& R) {
  return {L.a * R.a + L.b * R.c, L.a * R.b + L.b * R.d, L.c * R.a + L.d * R.c,
          L.c * R.b + L.d * R.d};
}

double frob(const Matrix2& m) {
  return std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d));
}

}  // namespace

LyapunovReport lyapunov(const WalkPath& path, const std::complex<double>& x,
                        const std::complex<double>& y, long n, const FiltrationParams& params,
                        const Budget& budget) {
  if (n < 1) throw error(errc::config_error, "cocycle needs n >= 1");
  std::vector<PlaneAutomorphism> atoms;
  for (const auto& a : path.measure().atoms) atoms.push_back(compose_word(a.word, budget));

  Matrix2 prod{1.0, 0.0, 0.0, 1.0};
  double log_scale = 0.0;
  long renorms = 0;
  std::complex<double> cx = x, cy = y;
  for (long i = 0; i < n; ++i) {
    ScaledPoint q = make_scaled(cx, cy);
    if (classify_point(q, params) != RegionTag::Ball) {
      throw error(errc::orbit_escaped, "exponents are only defined along bounded orbit segments");
    }
    const PlaneAutomorphism& f = atoms[static_cast<size_t>(path.atom_index(i))];
    auto d = f.differential(cx, cy);
    Matrix2 df{d[0], d[1], d[2], d[3]};
    prod = mul(df, prod);
    double c = frob(prod);
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw error(errc::internal_error, "degenerate differential along the orbit");
    }
    prod.a /= c;
    prod.b /= c;
    prod.c /= c;
    prod.d /= c;
    log_scale += std::log(c);
    ++renorms;
    std::complex<double> nx = f.first().eval(cx, cy);
    std::complex<double> ny = f.second().eval(cx, cy);
    cx = nx;
    cy = ny;
  }
  // singular values of the renormalized product
  double t = std::norm(prod.a) + std::norm(prod.b) + std::norm(prod.c) + std::norm(prod.d);
  std::complex<double> det = prod.a * prod.d - prod.b * prod.c;
  double d2 = std::norm(det);
  double disc = std::max(0.0, t * t - 4.0 * d2);
  double s2_max = 0.5 * (t + std::sqrt(disc));
  double s_max = std::sqrt(s2_max);
  double s_min = s_max > 0.0 ? std::min(std::abs(det) / s_max, s_max) : 0.0;
  LyapunovReport rep;
  rep.n_used = n;
  rep.renormalizations = renorms;
  rep.lambda_plus = (log_scale + std::log(s_max)) / static_cast<double>(n);
  rep.lambda_minus = (log_scale + std::log(s_min)) / static_cast<double>(n);
  return rep;
}

JacobianDrift jacobian_drift(const MeasureSpec& mu) {
  JacobianDrift out;
  BigInt denom(1);
  for (const auto& a : mu.atoms) denom = BigInt::lcm(denom, a.weight.den());
  double drift = 0.0;
  Rational cleared_product(1);
  bool exact_ok = denom.fits_u64() && denom.to_u64() <= 1000000ULL;
  for (const auto& a : mu.atoms) {
    GaussianRational jac = compose_word(a.word).jacobian();
    Rational jac2 = jac.norm2();  // |Jac|^2, exact
    drift += a.weight.to_double() * 0.5 * jac2.log();
    if (exact_ok) {
      BigInt exponent = a.weight.num() * (denom / a.weight.den());
      cleared_product *= jac2.pow(static_cast<long>(exponent.to_u64()));
    }
  }
  out.drift = drift;
  if (exact_ok) {
    if (cleared_product == Rational(1)) {
      out.classification = VolumeClass::Conservative;
      out.drift = 0.0;  // exactly zero, suppress rounding dust
    } else if (cleared_product > Rational(1)) {
      out.classification = VolumeClass::Expanding;
    } else {
      out.classification = VolumeClass::Dissipative;
    }
  } else {
    out.classification = drift > 0 ? VolumeClass::Expanding
                                   : (drift < 0 ? VolumeClass::Dissipative
                                                : VolumeClass::Conservative);
  }
  return out;
}

DichotomyReport escape_dichotomy_experiment(
    const std::shared_ptr<const MeasureSpec>& mu, const std::vector<std::uint64_t>& seeds,
    const std::vector<std::pair<std::complex<double>, std::complex<double>>>& points, long n,
    const FiltrationParams& params, bool parallel) {
  std::vector<PlaneAutomorphism> atoms;
  for (const auto& a : mu->atoms) atoms.push_back(compose_word(a.word));
  const size_t total = seeds.size() * points.size();
  DichotomyReport rep;
  rep.rows.resize(total);
  auto body = [&](size_t idx) {
    size_t si = idx / points.size();
    size_t pi = idx % points.size();
    WalkPath path(mu, seeds[si]);
    DichotomyRow row;
    row.seed = seeds[si];
    row.px = points[pi].first;
    row.py = points[pi].second;
    ScaledPoint q = make_scaled(points[pi].first, points[pi].second);
    row.max_log_norm = q.log_norm;
    for (long i = 0; i < n; ++i) {
      if (classify_point(q, params) == RegionTag::VPlus) {
        row.escaped = true;
        row.hit_time = i;
        break;
      }
      q = eval_scaled(atoms[static_cast<size_t>(path.atom_index(i))], q);
      row.max_log_norm = std::max(row.max_log_norm, q.log_norm);
    }
    rep.rows[idx] = row;
  };
  if (parallel) {
    parallel_for(total, body);
  } else {
    serial_for(total, body);
  }
  for (const auto& row : rep.rows) {
    if (row.escaped) {
      ++rep.escaped_count;
    } else {
      rep.bound_radius = std::max(rep.bound_radius, std::exp(row.max_log_norm));
    }
  }
  return rep;
}

}  // namespace greenwalk
