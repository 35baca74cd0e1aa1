#include "greenwalk/blowup.hpp"

#include <algorithm>
#include <array>
#include <optional>

namespace greenwalk {

namespace {

const GaussianRational kOne{Rational(1)};

// ---- univariate helpers over Q(i) ----

UniPoly unipoly_mod(const UniPoly& a, const UniPoly& b) {
  UniPoly r = a;
  int db = b.degree();
  GaussianRational lead_b = b.leading();
  while (!r.is_zero() && r.degree() >= db) {
    int shift = r.degree() - db;
    GaussianRational q = r.leading() / lead_b;
    for (const auto& [k, c] : b.terms()) r.add_term(k + shift, -(q * c));
  }
  return r;
}

UniPoly unipoly_gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = unipoly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) a = a.scale(a.leading().inverse());  // monic
  return a;
}

// g = (y - r)^k exactly, for monic g; the unique-root extraction.
std::optional<GaussianRational> unique_root(const UniPoly& g) {
  int k = g.degree();
  if (k <= 0) return std::nullopt;
  GaussianRational r = -(g.coeff(k - 1) / GaussianRational{Rational(k)});
  UniPoly lin;
  lin.add_term(1, kOne);
  lin.add_term(0, -r);
  UniPoly power = UniPoly::constant(kOne);
  for (int i = 0; i < k; ++i) power = power * lin;
  if (power != g) return std::nullopt;
  return r;
}

// ---- binary-form helpers ----

// form = c (X + wY)^n or c Y^n; returns the projective zero on Z = 0.
std::optional<ProjectivePoint> linear_power_root(const PlanePolynomial& form, int n) {
  GaussianRational t0 = form.coeff(n, 0);
  if (!t0.is_zero()) {
    GaussianRational w = form.coeff(n - 1, 1) / (t0 * GaussianRational{Rational(n)});
    PlanePolynomial lin;
    lin.add_term(1, 0, kOne);
    lin.add_term(0, 1, w);
    Budget loose;
    PlanePolynomial expect = lin.pow(n, loose).scale(t0);
    if (expect != form) return std::nullopt;
    return normalize_projective(-w, kOne, GaussianRational{});
  }
  for (const auto& [e, c] : form.terms()) {
    if (e.second != n) return std::nullopt;  // not a pure power of Y
  }
  return normalize_projective(kOne, GaussianRational{}, GaussianRational{});
}

// ---- local germ machinery ----

struct Germ {
  std::array<PlanePolynomial, 3> f;  // map to P^2 in local coordinates (s, t)
};

int min_order(const Germ& g) {
  int m = std::numeric_limits<int>::max();
  for (const auto& p : g.f) {
    for (const auto& [e, c] : p.terms()) m = std::min(m, e.first + e.second);
  }
  return m == std::numeric_limits<int>::max() ? 0 : m;
}

PlanePolynomial remap_chart_a(const PlanePolynomial& p, int m) {
  PlanePolynomial out;
  for (const auto& [e, c] : p.terms()) out.add_term(e.first + e.second - m, e.second, c);
  return out;
}

PlanePolynomial remap_chart_b(const PlanePolynomial& p, int m) {
  PlanePolynomial out;
  for (const auto& [e, c] : p.terms()) out.add_term(e.first, e.first + e.second - m, c);
  return out;
}

// restriction to the exceptional line {s = 0} as a polynomial in the fiber
// coordinate
UniPoly restrict_to_exceptional(const PlanePolynomial& p) {
  UniPoly out;
  for (const auto& [e, c] : p.terms()) {
    if (e.first == 0) out.add_term(e.second, c);
  }
  return out;
}

PlanePolynomial shift_y(const PlanePolynomial& p, const GaussianRational& r,
                        const Budget& budget) {
  PlanePolynomial py = PlanePolynomial::variable_y();
  py.add_term(0, 0, r);
  return p.compose(PlanePolynomial::variable_x(), py, budget);
}

// chart restriction of the homogenized extension of f
Germ initial_germ(const PlaneAutomorphism& f, const ProjectivePoint& p1, const Budget& budget) {
  const int d = f.degree();
  Germ g;
  auto homog_chart_x = [&](const PlanePolynomial& poly) {
    PlanePolynomial out;  // (w, z) = (Y/X, Z/X)
    for (const auto& [e, c] : poly.terms()) out.add_term(e.second, d - e.first - e.second, c);
    return out;
  };
  auto homog_chart_y = [&](const PlanePolynomial& poly) {
    PlanePolynomial out;  // (u, z) = (X/Y, Z/Y)
    for (const auto& [e, c] : poly.terms()) out.add_term(e.first, d - e.first - e.second, c);
    return out;
  };
  if (!p1.x.is_zero()) {
    // p1 = [1 : y0 : 0] in the X-chart; recenter the coordinate along L_inf
    GaussianRational y0 = p1.y;
    g.f[0] = homog_chart_x(f.first());
    g.f[1] = homog_chart_x(f.second());
    g.f[2] = PlanePolynomial::monomial(0, d, kOne);  // Z^d
    if (!y0.is_zero()) {
      PlanePolynomial px = PlanePolynomial::variable_x();
      px.add_term(0, 0, y0);
      for (auto& p : g.f) p = p.compose(px, PlanePolynomial::variable_y(), budget);
    }
  } else {
    g.f[0] = homog_chart_y(f.first());
    g.f[1] = homog_chart_y(f.second());
    g.f[2] = PlanePolynomial::monomial(0, d, kOne);
  }
  return g;
}

// anchor chart marker for the first tower point
char p1_chart(const ProjectivePoint& p1) { return p1.x.is_zero() ? 'Y' : 'X'; }

}  // namespace

ProjectivePoint normalize_projective(const GaussianRational& x, const GaussianRational& y,
                                     const GaussianRational& z) {
  ProjectivePoint p;
  if (!x.is_zero()) {
    p.x = kOne;
    p.y = y / x;
    p.z = z / x;
  } else if (!y.is_zero()) {
    p.x = GaussianRational{};
    p.y = kOne;
    p.z = z / y;
  } else if (!z.is_zero()) {
    p.x = GaussianRational{};
    p.y = GaussianRational{};
    p.z = kOne;
  } else {
    throw error(errc::internal_error, "projective point needs a nonzero coordinate");
  }
  return p;
}

ProjectivePoint indeterminacy_point(const PlaneAutomorphism& f) {
  const int d = f.degree();
  if (d < 2) {
    throw error(errc::no_indeterminacy, "affine maps extend without indeterminacy");
  }
  PlanePolynomial t1 = f.first().degree() == d ? f.first().top_form() : PlanePolynomial();
  PlanePolynomial t2 = f.second().degree() == d ? f.second().top_form() : PlanePolynomial();
  std::optional<ProjectivePoint> r1 =
      t1.is_zero() ? std::nullopt : linear_power_root(t1, d);
  std::optional<ProjectivePoint> r2 =
      t2.is_zero() ? std::nullopt : linear_power_root(t2, d);
  if (!t1.is_zero() && !r1) {
    throw error(errc::not_an_automorphism, "top form is not a power of a linear form");
  }
  if (!t2.is_zero() && !r2) {
    throw error(errc::not_an_automorphism, "top form is not a power of a linear form");
  }
  if (r1 && r2 && !(*r1 == *r2)) {
    throw error(errc::not_an_automorphism, "coordinate top forms vanish at different points");
  }
  if (r1) return *r1;
  if (r2) return *r2;
  throw error(errc::internal_error, "degree-d map without a degree-d coordinate");
}

long BasePointChain::multiplicity_sum() const {
  long s = 0;
  for (const auto& p : points) s += p.multiplicity;
  return s;
}
long BasePointChain::multiplicity_square_sum() const {
  long s = 0;
  for (const auto& p : points) s += static_cast<long>(p.multiplicity) * p.multiplicity;
  return s;
}

BasePointChain base_point_chain(const PlaneAutomorphism& f, long depth_limit,
                                const Budget& budget) {
  BasePointChain chain;
  chain.degree = f.degree();
  if (f.degree() < 2) {
    chain.p1 = normalize_projective(kOne, GaussianRational{}, GaussianRational{});
    chain.complete = true;
    return chain;  // affine: empty chain
  }
  chain.p1 = indeterminacy_point(f);
  Germ germ = initial_germ(f, chain.p1, budget);
  for (const auto& p : germ.f) {
    if (!p.coeff(0, 0).is_zero()) {
      throw error(errc::internal_error, "initial germ does not vanish at the base point");
    }
  }
  ChainPoint cur;
  cur.chart = p1_chart(chain.p1);
  cur.coord = chain.p1.x.is_zero() ? GaussianRational{} : chain.p1.y;

  for (;;) {
    int m = min_order(germ);
    if (m <= 0) {
      throw error(errc::internal_error, "blow-up requested at a point that is not a base point");
    }
    cur.multiplicity = m;
    chain.points.push_back(cur);

    // blow up: chart A covers directions [1 : v], chart B adds [0 : 1]
    Germ chart_a, chart_b;
    for (int i = 0; i < 3; ++i) {
      chart_a.f[i] = remap_chart_a(germ.f[i], m);
      chart_b.f[i] = remap_chart_b(germ.f[i], m);
    }
    UniPoly g = unipoly_gcd(
        unipoly_gcd(restrict_to_exceptional(chart_a.f[0]), restrict_to_exceptional(chart_a.f[1])),
        restrict_to_exceptional(chart_a.f[2]));
    std::optional<GaussianRational> root_a;
    if (g.degree() >= 1) {
      root_a = unique_root(g);
      if (!root_a) {
        throw error(errc::chart_degeneracy,
                    "multiple base points on one exceptional line; not a single tower");
      }
    }
    bool b_origin = chart_b.f[0].coeff(0, 0).is_zero() && chart_b.f[1].coeff(0, 0).is_zero() &&
                    chart_b.f[2].coeff(0, 0).is_zero();
    if (root_a && b_origin) {
      throw error(errc::chart_degeneracy,
                  "base points in both blow-up charts; not a single tower");
    }
    if (!root_a && !b_origin) {
      chain.complete = true;
      break;
    }
    if (chain.count() >= depth_limit) {
      chain.complete = false;
      break;
    }
    if (root_a) {
      for (int i = 0; i < 3; ++i) germ.f[i] = shift_y(chart_a.f[i], *root_a, budget);
      cur = ChainPoint{'A', *root_a, 1};
    } else {
      germ = chart_b;
      cur = ChainPoint{'B', GaussianRational{}, 1};
    }
  }

  if (chain.complete) {
    long d = chain.degree;
    if (chain.multiplicity_sum() != 3 * (d - 1) ||
        chain.multiplicity_square_sum() != d * d - 1) {
      throw error(errc::internal_error, "resolved tower violates the Noether identities");
    }
  }
  return chain;
}

bool chain_prefix_matches(const BasePointChain& whole, const BasePointChain& prefix) {
  if (!(whole.p1 == prefix.p1)) return false;
  if (whole.points.size() < prefix.points.size()) return false;
  for (size_t i = 0; i < prefix.points.size(); ++i) {
    if (!whole.points[i].same_location(prefix.points[i])) return false;
  }
  return true;
}

bool base_additivity_check(const PlaneAutomorphism& f, const PlaneAutomorphism& g,
                           long depth_limit, const Budget& budget) {
  BasePointChain cf = base_point_chain(f, depth_limit, budget);
  BasePointChain cg = base_point_chain(g, depth_limit, budget);
  PlaneAutomorphism gf = compose(g, f, budget);
  BasePointChain cgf = base_point_chain(gf, depth_limit, budget);
  if (!cf.complete || !cg.complete || !cgf.complete) {
    throw error(errc::depth_exceeded, "base-point tower exceeds the depth limit");
  }
  if (cgf.count() != cf.count() + cg.count()) return false;
  if (cf.count() > 0 && !chain_prefix_matches(cgf, cf)) return false;
  return true;
}

BasePointChain stable_chain(const PrefixTable& table, long depth, const Budget& budget) {
  // compose pairs until the tower carries `depth` points
  std::vector<Syllable> syllables;  // composition order
  if (table.leading_affine.has_value()) {
    syllables.emplace_back(*table.leading_affine);
  }
  PlaneAutomorphism map = compose_word(AmalgamWord::from_syllables(syllables), budget);
  int used = 0;
  for (const auto& pair : table.pairs) {
    map = compose(pair.h, map, budget);
    ++used;
    // each factor contributes at least 3(d-1) >= 3 base points
    if (3L * used >= depth) {
      BasePointChain chain = base_point_chain(map, depth, budget);
      if (chain.count() >= depth) {
        chain.points.resize(static_cast<size_t>(depth));
        chain.complete = false;  // truncated view of the limit tower
        return chain;
      }
    }
  }
  // prefix exhausted: report whatever the deepest available tower gives
  BasePointChain chain = base_point_chain(map, depth, budget);
  if (chain.count() < depth) {
    throw error(errc::not_stabilized,
                "stable prefix too shallow to pin " + std::to_string(depth) + " base points");
  }
  chain.points.resize(static_cast<size_t>(depth));
  chain.complete = false;
  return chain;
}

DivergenceReport chain_divergence_experiment(const std::shared_ptr<const MeasureSpec>& mu,
                                             const std::vector<std::uint64_t>& seeds, long depth,
                                             long n_max, const Budget& budget) {
  DivergenceReport rep;
  std::vector<BasePointChain> chains;
  chains.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    WalkPath path(mu, seed);
    PrefixTable table = stabilization_times(path, static_cast<int>(depth + 2), n_max);
    chains.push_back(stable_chain(table, depth, budget));
  }
  for (size_t i = 0; i + 1 < chains.size(); i += 2) {
    const BasePointChain& a = chains[i];
    const BasePointChain& b = chains[i + 1];
    int diverge = 0;
    if (!(a.p1 == b.p1)) {
      diverge = 1;
    } else {
      for (long d = 0; d < depth; ++d) {
        if (!a.points[static_cast<size_t>(d)].same_location(b.points[static_cast<size_t>(d)])) {
          diverge = static_cast<int>(d) + 1;
          break;
        }
      }
    }
    ++rep.pairs;
    rep.first_divergence_depth.push_back(diverge);
    if (diverge > 0) ++rep.diverged;
  }
  return rep;
}

}  // namespace greenwalk
