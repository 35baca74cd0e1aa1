#include "greenwalk/filtration.hpp"

#include <cmath>

#include "greenwalk/json_io.hpp"
#include "greenwalk/parallel.hpp"
#include "greenwalk/walk.hpp"

namespace greenwalk {

namespace {

struct MemberBounds {
  // forward chain: e first, then a
  int d = 2;
  Rational lb_pd, s_low, ub_alpha, s_ub;
  Rational u_row0, lb_a, ub_m11, ub_t1;
  // inverse chain: a^{-1} first, then e^{-1}
  Rational lb_ai, ub_ai_m11, ub_ai_t1, u_row0_i;
  Rational lb_ptd, s_low_t, ub_alpha_t, s_ub_t;
  Rational c_ub_h;  // sum of coefficient magnitude bounds of h
};

MemberBounds member_bounds(const HMember& m) {
  MemberBounds b;
  b.d = m.e.poly_degree();
  b.lb_pd = m.e.p.leading().mag_lb();
  for (const auto& [k, c] : m.e.p.terms()) {
    if (k < b.d) b.s_low += c.mag_ub();
  }
  b.ub_alpha = m.e.alpha.mag_ub();
  b.s_ub = m.e.beta.mag_ub() + m.e.delta.mag_ub();
  b.u_row0 = m.a.m00.mag_ub() + m.a.m01.mag_ub() + m.a.t0.mag_ub();
  b.lb_a = m.a.m10.mag_lb();
  b.ub_m11 = m.a.m11.mag_ub();
  b.ub_t1 = m.a.t1.mag_ub();

  AffineSyllable ai = affine_inverse(m.a);
  ElementarySyllable ei = elementary_inverse(m.e);
  b.lb_ai = ai.m10.mag_lb();
  b.ub_ai_m11 = ai.m11.mag_ub();
  b.ub_ai_t1 = ai.t1.mag_ub();
  b.u_row0_i = ai.m00.mag_ub() + ai.m01.mag_ub() + ai.t0.mag_ub();
  b.lb_ptd = ei.p.leading().mag_lb();
  for (const auto& [k, c] : ei.p.terms()) {
    if (k < b.d) b.s_low_t += c.mag_ub();
  }
  b.ub_alpha_t = ei.alpha.mag_ub();
  b.s_ub_t = ei.beta.mag_ub() + ei.delta.mag_ub();

  for (const auto& [e, c] : m.h.first().terms()) b.c_ub_h += c.mag_ub();
  for (const auto& [e, c] : m.h.second().terms()) b.c_ub_h += c.mag_ub();
  return b;
}

bool verify_member(const MemberBounds& b, const Rational& eps, const Rational& R) {
  const Rational one(1), four(4), two(2);
  const long d = b.d;

  // Forward: q in V+, |y| >= eps*R =: y0.
  Rational y0 = eps * R;
  if (y0 < one) return false;
  // |p(y)| >= (3/4) lb_pd |y|^d once the lower-order tail is dominated.
  if (four * b.s_low > b.lb_pd * y0) return false;
  // subtracting |alpha x| <= ub_alpha |y| / eps keeps half the growth
  if (four * b.ub_alpha > eps * y0.pow(d - 1) * b.lb_pd) return false;
  Rational x_img = (b.lb_pd / two) * y0.pow(d);        // |first(e q)| lower bound at y = y0
  Rational kappa = (b.lb_pd / two) * y0.pow(d - 1) / b.s_ub;  // cone aspect of e(q)
  if (kappa < one || x_img < one) return false;
  // affine gain on the x-dominant cone
  if (four * b.ub_m11 > b.lb_a * kappa) return false;
  if (four * b.ub_t1 > b.lb_a * x_img) return false;
  // image cone ratio >= 2 eps > eps
  if (b.lb_a < four * eps * b.u_row0) return false;
  // image norm >= C ||q||^d >= R
  Rational growth = (b.lb_a / two) * (b.lb_pd / two) * eps.pow(d);
  if (growth * R.pow(d - 1) < one) return false;

  // Inverse: q in V-, a^{-1} first.
  if (four * eps * b.ub_ai_m11 > b.lb_ai) return false;
  if (four * b.ub_ai_t1 > b.lb_ai * R) return false;
  Rational y1 = (b.lb_ai / two) * R;
  if (y1 < one) return false;
  Rational ratio_mid = b.u_row0_i.is_zero() ? Rational(1000000)
                                            : (b.lb_ai / two) / b.u_row0_i;
  if (four * b.s_low_t > b.lb_ptd * y1) return false;
  if (four * b.ub_alpha_t > ratio_mid * y1.pow(d - 1) * b.lb_ptd) return false;
  Rational x2 = (b.lb_ptd / two) * y1.pow(d);
  // strict V- cone with margin 2 and norm >= R
  if (x2 * eps < two * b.s_ub_t * y1) return false;
  if (x2 < R) return false;
  return true;
}

std::vector<MemberBounds> family_bounds(const HFamily& family) {
  if (family.members.empty()) {
    throw error(errc::config_error, "filtration family is empty");
  }
  std::vector<MemberBounds> out;
  out.reserve(family.members.size());
  for (const auto& m : family.members) {
    if (m.a.m10.is_zero()) {
      throw error(errc::cone_obstruction,
                  "affine part fixes the horizontal direction at infinity",
                  syllable_to_json(Syllable(m.a)).dump());
    }
    out.push_back(member_bounds(m));
  }
  return out;
}

}  // namespace

HMember make_member(const AffineSyllable& a, const ElementarySyllable& e) {
  if (e.poly_degree() < 2) {
    throw error(errc::config_error, "family member needs an elementary part of degree >= 2");
  }
  HMember m;
  m.a = a;
  m.e = e;
  m.h = compose(syllable_automorphism(Syllable(a)), syllable_automorphism(Syllable(e)));
  m.h_inv = compose(syllable_automorphism(syllable_inverse(Syllable(e))),
                    syllable_automorphism(syllable_inverse(Syllable(a))));
  m.degree = m.h.degree();
  return m;
}

void FiltrationParams::refresh_doubles() {
  eps_d = epsilon.to_double();
  log_R_d = R.log();
  log_C_d = C_eps.sign() > 0 ? C_eps.log() : 0.0;
  M_d = M_eps.to_double();
}

bool verify_constants(const HFamily& family, const Rational& epsilon, const Rational& R) {
  auto bounds = family_bounds(family);
  for (const auto& b : bounds) {
    if (!verify_member(b, epsilon, R)) return false;
  }
  return true;
}

FiltrationParams compute_constants(const HFamily& family) {
  auto bounds = family_bounds(family);

  Rational eps(1, 2);
  const Rational four(4);
  for (const auto& b : bounds) {
    if (!b.u_row0.is_zero()) {
      Rational cap = b.lb_a / (four * b.u_row0);
      if (cap < eps) eps = cap;
    }
    if (!b.ub_ai_m11.is_zero()) {
      Rational cap = b.lb_ai / (four * b.ub_ai_m11);
      if (cap < eps) eps = cap;
    }
  }
  if (eps.sign() <= 0) {
    throw error(errc::cone_obstruction, "no positive cone aperture works for this family");
  }

  Rational R(2);
  int doublings = 0;
  while (true) {
    bool ok = true;
    for (const auto& b : bounds) {
      if (!verify_member(b, eps, R)) {
        ok = false;
        break;
      }
    }
    if (ok) break;
    R = R * Rational(2);
    if (++doublings > 16384) {
      throw error(errc::internal_error, "escape radius search did not converge");
    }
  }

  FiltrationParams params;
  params.epsilon = eps;
  params.R = R;
  Rational c_min;
  bool have_c = false;
  double m_eps = 0.0;
  for (const auto& b : bounds) {
    Rational growth = (b.lb_a / Rational(2)) * (b.lb_pd / Rational(2)) * eps.pow(b.d);
    if (!have_c || growth < c_min) {
      c_min = growth;
      have_c = true;
    }
    double lo = std::abs(growth.log()) / static_cast<double>(b.d);
    double hi = std::abs(b.c_ub_h.log()) / static_cast<double>(b.d);
    m_eps = std::max({m_eps, lo, hi});
  }
  params.C_eps = c_min;
  params.M_eps = Rational::from_double(m_eps * (1.0 + 1e-9) + 1e-9);
  params.refresh_doubles();
  return params;
}

RegionTag classify_point(const ScaledPoint& q, const FiltrationParams& params) {
  if (q.is_origin() || q.log_norm < params.log_R_d) return RegionTag::Ball;
  return std::abs(q.dy) >= params.eps_d * std::abs(q.dx) ? RegionTag::VPlus : RegionTag::VMinus;
}

StepCertificate certify_step(const HMember& member, const ScaledPoint& q,
                             const FiltrationParams& params) {
  StepCertificate out;
  out.next = eval_scaled(member.h, q);
  const double d = static_cast<double>(member.degree);
  const double slack = 1e-9 + 1e-12 * std::abs(q.log_norm) * d;
  bool in_cone = classify_point(out.next, params) == RegionTag::VPlus;
  bool growth = out.next.log_norm + slack >= d * q.log_norm + params.log_C_d;
  bool pinched = std::abs(out.next.log_norm / d - q.log_norm) <= params.M_d + slack;
  out.growth_ok = in_cone && growth && pinched;
  return out;
}

ScaledPoint certify_step_or_throw(const HMember& member, const ScaledPoint& q,
                                  const FiltrationParams& params) {
  StepCertificate c = certify_step(member, q, params);
  if (!c.growth_ok) {
    json witness;
    witness["log_norm"] = q.log_norm;
    witness["dx"] = {q.dx.real(), q.dx.imag()};
    witness["dy"] = {q.dy.real(), q.dy.imag()};
    witness["member_degree"] = member.degree;
    witness["next_log_norm"] = c.next.log_norm;
    throw error(errc::certification_failure, "filtration certificate violated at runtime",
                witness.dump());
  }
  return c.next;
}

namespace {

double uniform01(std::uint64_t seed, std::uint64_t counter, std::uint64_t slot) {
  return static_cast<double>(counter_rng(seed, counter, slot) >> 11) * 0x1.0p-53;
}

}  // namespace

ScaledPoint sample_vplus(const FiltrationParams& params, std::uint64_t seed, std::uint64_t counter,
                         double log_hi) {
  ScaledPoint q;
  double u0 = uniform01(seed, counter, 0);
  double th1 = 2.0 * M_PI * uniform01(seed, counter, 1);
  double u2 = uniform01(seed, counter, 2);
  double th3 = 2.0 * M_PI * uniform01(seed, counter, 3);
  if (u0 < 0.5) {
    q.dy = std::polar(1.0, th1);
    q.dx = std::polar(std::sqrt(u2), th3);
  } else {
    q.dx = std::polar(1.0, th1);
    q.dy = std::polar(params.eps_d + (1.0 - params.eps_d) * u2, th3);
  }
  q.log_norm = params.log_R_d + uniform01(seed, counter, 4) * (log_hi - params.log_R_d);
  q.bounded = q.log_norm <= 700.0;
  return q;
}

ScaledPoint sample_vminus(const FiltrationParams& params, std::uint64_t seed,
                          std::uint64_t counter, double log_hi) {
  ScaledPoint q;
  double th1 = 2.0 * M_PI * uniform01(seed, counter, 1);
  double u2 = uniform01(seed, counter, 2);
  double th3 = 2.0 * M_PI * uniform01(seed, counter, 3);
  q.dx = std::polar(1.0, th1);
  q.dy = std::polar(0.999 * params.eps_d * u2, th3);
  q.log_norm = params.log_R_d + uniform01(seed, counter, 4) * (log_hi - params.log_R_d);
  q.bounded = q.log_norm <= 700.0;
  return q;
}

namespace {

CertificationReport run_certification(const HFamily& family, const FiltrationParams& params,
                                      long samples, std::uint64_t seed, double log_hi,
                                      bool parallel, bool inverse) {
  const size_t n = static_cast<size_t>(samples);
  std::vector<unsigned char> fail(n, 0);
  std::vector<std::string> notes(n);
  auto body = [&](size_t i) {
    const HMember& m = family.members[i % family.members.size()];
    if (!inverse) {
      ScaledPoint q = sample_vplus(params, seed, i, log_hi);
      StepCertificate c = certify_step(m, q, params);
      if (!c.growth_ok) {
        fail[i] = 1;
        json w;
        w["index"] = i;
        w["log_norm"] = q.log_norm;
        w["next_log_norm"] = c.next.log_norm;
        notes[i] = w.dump();
      }
    } else {
      ScaledPoint q = sample_vminus(params, seed, i, log_hi);
      ScaledPoint back = eval_scaled(m.h_inv, q);
      if (classify_point(back, params) != RegionTag::VMinus) {
        fail[i] = 1;
        json w;
        w["index"] = i;
        w["log_norm"] = q.log_norm;
        w["back_log_norm"] = back.log_norm;
        notes[i] = w.dump();
      }
    }
  };
  if (parallel) {
    parallel_for(n, body);
  } else {
    serial_for(n, body);
  }
  CertificationReport rep;
  rep.samples = samples;
  for (size_t i = 0; i < n; ++i) {
    if (fail[i]) {
      ++rep.failures;
      if (rep.witness.empty()) rep.witness = notes[i];
    }
  }
  return rep;
}

}  // namespace

CertificationReport certify_family_monte_carlo(const HFamily& family,
                                               const FiltrationParams& params, long samples,
                                               std::uint64_t seed, double log_hi, bool parallel) {
  return run_certification(family, params, samples, seed, log_hi, parallel, false);
}

CertificationReport certify_inverse_clause(const HFamily& family, const FiltrationParams& params,
                                           long samples, std::uint64_t seed, double log_hi,
                                           bool parallel) {
  return run_certification(family, params, samples, seed, log_hi, parallel, true);
}

}  // namespace greenwalk
