#include "greenwalk/green.hpp"

#include <cmath>

#include "greenwalk/json_io.hpp"
#include "greenwalk/parallel.hpp"

namespace greenwalk {

StablePrefix StablePrefix::from_table(const PrefixTable& table) {
  StablePrefix p;
  p.leading_affine = table.leading_affine;
  for (const auto& sp : table.pairs) p.factors.push_back(make_member(sp.a, sp.e));
  return p;
}

HFamily StablePrefix::family() const {
  HFamily fam;
  std::vector<std::string> seen;
  for (const auto& m : factors) {
    std::string key = canonical_key(m.h);
    bool dup = false;
    for (const auto& k : seen) {
      if (k == key) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      seen.push_back(std::move(key));
      fam.members.push_back(m);
    }
  }
  return fam;
}

USequenceResult u_sequence(const std::vector<HMember>& factors, const ScaledPoint& q,
                           const FiltrationParams& params, double tol, long budget) {
  USequenceResult r;
  ScaledPoint p = q;
  double d_prod = 1.0;
  long max_steps = std::min<long>(budget, static_cast<long>(factors.size()));
  RegionTag region = classify_point(p, params);
  long k = 0;

  // uncertified phase: march until the orbit certifies into V+
  while (region != RegionTag::VPlus && k < max_steps) {
    RegionTag prev = region;
    p = eval_scaled(factors[static_cast<size_t>(k)].h, p);
    d_prod *= static_cast<double>(factors[static_cast<size_t>(k)].degree);
    ++k;
    region = classify_point(p, params);
    if (prev == RegionTag::Ball && region == RegionTag::VMinus) {
      // a ball point can only exit through V+; the inverse clause forbids this
      json w;
      w["step"] = k;
      w["log_norm"] = p.log_norm;
      throw error(errc::certification_failure,
                  "orbit left the ball through the horizontal cone", w.dump());
    }
  }
  if (region != RegionTag::VPlus) {
    r.escaped = false;
    r.k = static_cast<int>(k);
    return r;  // bounded at this budget
  }

  r.escaped = true;
  r.hit_time = k;
  r.u = p.log_plus_norm() / d_prod;
  r.err = 2.0 * params.M_d / d_prod;
  while (r.err >= tol && k < max_steps) {
    const HMember& m = factors[static_cast<size_t>(k)];
    p = certify_step_or_throw(m, p, params);
    d_prod *= static_cast<double>(m.degree);
    ++k;
    if (!std::isfinite(d_prod)) {
      r.err = 0.0;
      break;
    }
    r.u = p.log_norm / d_prod;
    r.err = 2.0 * params.M_d / d_prod;
  }
  r.k = static_cast<int>(k);
  return r;
}

GreenValue green_evaluate(const StablePrefix& prefix, const FiltrationParams& params,
                          const ScaledPoint& q, double tol, long budget) {
  GreenValue out;
  out.budget = budget;
  if (q.log_norm <= 700.0) {
    auto [x, y] = point_value(q);
    out.px = x;
    out.py = y;
  }
  ScaledPoint p = q;
  if (prefix.leading_affine.has_value()) {
    p = eval_scaled(syllable_automorphism(Syllable(*prefix.leading_affine)), p);
  }
  USequenceResult r = u_sequence(prefix.factors, p, params, tol, budget);
  out.k_used = r.k;
  out.hit_time = r.hit_time;
  if (!r.escaped) {
    out.status = GreenValue::Status::BoundedAtBudget;
    out.value = 0.0;
    out.error_bound = 0.0;
    return out;
  }
  if (r.err > tol) {
    throw error(errc::not_stabilized,
                "stable prefix too shallow for the requested tolerance");
  }
  out.status = GreenValue::Status::Escaped;
  out.value = r.u;
  out.error_bound = r.err;
  return out;
}

double direct_normalized_log(const AmalgamWord& word, const ScaledPoint& q) {
  ScaledPoint p = q;
  double deg_log = 0.0;
  for (size_t i = 0; i < word.size(); ++i) {
    const Syllable& s = word.from_right(i);
    p = eval_scaled(syllable_automorphism(s), p);
    deg_log += std::log(static_cast<double>(syllable_degree(s)));
  }
  double lp = p.log_plus_norm();
  if (lp <= 0.0) return 0.0;
  return std::exp(std::log(lp) - deg_log);
}

GreenValue classical_green(const PlaneAutomorphism& f, const ScaledPoint& q, double tol,
                           long budget) {
  AmalgamWord word = jung_decompose(f);
  WordClass cls = cyclic_reduce_classify(word);
  if (cls.kind != WordClass::Loxodromic) {
    throw error(errc::config_error, "classical escape values need a loxodromic map");
  }
  GreenValue out;
  out.budget = budget;
  if (q.log_norm <= 700.0) {
    auto [x, y] = point_value(q);
    out.px = x;
    out.py = y;
  }
  const double activation =
      std::log(1e8) + std::log1p(f.first().coeff_mag_sum() + f.second().coeff_mag_sum());
  const double lambda = static_cast<double>(cls.dynamical_degree);

  ScaledPoint p = q;
  WordAccumulator acc;  // word of f^n, for the exact iterate degree
  std::vector<double> logdeg_prefix{0.0};
  double prev_u = q.log_plus_norm();
  double prev_log = p.log_norm;
  int grow_streak = 0;
  for (long n = 1; n <= budget; ++n) {
    p = eval_scaled(f, p);
    size_t touched = acc.left_multiply(word);
    const auto& rts = acc.word().storage();
    if (logdeg_prefix.size() < rts.size() + 1) logdeg_prefix.resize(rts.size() + 1, 0.0);
    for (size_t i = touched; i < rts.size(); ++i) {
      logdeg_prefix[i + 1] =
          logdeg_prefix[i] + std::log(static_cast<double>(syllable_degree(rts[i])));
    }
    double deg_log = rts.empty() ? 0.0 : logdeg_prefix[rts.size()];
    double u = p.log_plus_norm() <= 0.0 ? 0.0 : std::exp(std::log(p.log_plus_norm()) - deg_log);
    grow_streak = p.log_norm > prev_log ? grow_streak + 1 : 0;
    prev_log = p.log_norm;
    double diff = std::abs(u - prev_u);
    prev_u = u;
    if (p.log_norm > activation && grow_streak >= 3 &&
        diff * lambda / (lambda - 1.0) < 0.5 * tol) {
      out.status = GreenValue::Status::Escaped;
      out.value = u;
      out.error_bound = tol;
      out.hit_time = n;
      out.k_used = static_cast<int>(n);
      return out;
    }
    if (p.log_norm > 1e280) {  // converged numerically as far as doubles go
      out.status = GreenValue::Status::Escaped;
      out.value = u;
      out.error_bound = tol;
      out.hit_time = n;
      out.k_used = static_cast<int>(n);
      return out;
    }
  }
  out.status = GreenValue::Status::BoundedAtBudget;
  out.value = 0.0;
  out.error_bound = 0.0;
  out.k_used = static_cast<int>(budget);
  return out;
}

InfinityPoint affine_pullback_of_infinity(const AffineSyllable& a) {
  // a^{-1} acts on the line at infinity through the inverse linear part;
  // the image of [1:0:0] is [m11 : -m10 : 0] up to scale.
  GaussianRational x = a.m11;
  GaussianRational y = -a.m10;
  InfinityPoint p;
  if (!x.is_zero()) {
    p.x = GaussianRational{Rational(1)};
    p.y = y / x;
  } else {
    p.x = GaussianRational{};
    p.y = GaussianRational{Rational(1)};
  }
  return p;
}

InfinityPoint escape_direction(const StablePrefix& prefix) {
  if (!prefix.leading_affine.has_value()) {
    if (prefix.factors.empty()) {
      throw error(errc::not_stabilized, "no stable prefix observed yet");
    }
    return InfinityPoint{GaussianRational{Rational(1)}, GaussianRational{}};
  }
  return affine_pullback_of_infinity(*prefix.leading_affine);
}

std::vector<GreenValue> render_slice(const StablePrefix& prefix, const FiltrationParams& params,
                                     const SliceWindow& window, double tol, long budget,
                                     bool parallel) {
  const size_t cells = static_cast<size_t>(std::max(window.nx, 0)) *
                       static_cast<size_t>(std::max(window.ny, 0));
  std::vector<GreenValue> grid(cells);
  if (cells == 0) return grid;
  auto body = [&](size_t idx) {
    int i = static_cast<int>(idx % static_cast<size_t>(window.nx));
    int j = static_cast<int>(idx / static_cast<size_t>(window.nx));
    double s = (i + 0.5) / window.nx;
    double t = (j + 0.5) / window.ny;
    std::complex<double> x = window.origin_x + s * window.ex_x + t * window.ey_x;
    std::complex<double> y = window.origin_y + s * window.ex_y + t * window.ey_y;
    try {
      grid[idx] = green_evaluate(prefix, params, make_scaled(x, y), tol, budget);
    } catch (const error&) {
      GreenValue bad;
      bad.px = x;
      bad.py = y;
      bad.error_bound = -1.0;  // per-cell failure marker
      grid[idx] = bad;
    }
  };
  if (parallel) {
    parallel_for(cells, body);
  } else {
    serial_for(cells, body);
  }
  return grid;
}

}  // namespace greenwalk
