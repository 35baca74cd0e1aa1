#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "greenwalk/walk.hpp"

namespace greenwalk {

// Point of the projective plane, normalized so the first nonzero coordinate
// is 1; exact coordinates.
struct ProjectivePoint {
  GaussianRational x, y, z;
  friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
  friend bool operator!=(const ProjectivePoint& a, const ProjectivePoint& b) { return !(a == b); }
};

ProjectivePoint normalize_projective(const GaussianRational& x, const GaussianRational& y,
                                     const GaussianRational& z);

// Unique common zero at infinity of the homogenized coordinate forms.
// Throws errc::no_indeterminacy for affine maps.
ProjectivePoint indeterminacy_point(const PlaneAutomorphism& f);

// One infinitely-near base point: 'X'/'Y' marks which affine chart of the
// plane anchors the tower, 'A' a root along the latest exceptional line,
// 'B' the point that only the second blow-up chart sees. `coord` is the
// exact local coordinate of the point in that chart; multiplicities feed the
// cross-checks sum m = 3(d-1), sum m^2 = d^2 - 1.
struct ChainPoint {
  char chart = 'A';
  GaussianRational coord;
  int multiplicity = 1;

  bool same_location(const ChainPoint& o) const { return chart == o.chart && coord == o.coord; }
};

struct BasePointChain {
  ProjectivePoint p1;
  int degree = 1;
  std::vector<ChainPoint> points;
  bool complete = true;  // false when the depth limit cut the tower

  long count() const { return static_cast<long>(points.size()); }
  long multiplicity_sum() const;
  long multiplicity_square_sum() const;
};

// Iterated chart-wise blow-ups in exact arithmetic, following the unique
// base point along the exceptional lines. Complete chains are checked
// against the Noether identities. `depth_limit` caps the tower.
BasePointChain base_point_chain(const PlaneAutomorphism& f, long depth_limit,
                                const Budget& budget = {});

// |base(g o f)| = |base(f)| + |base(g)| and chain prefix agreement; chains
// must resolve within the depth limit (errc::depth_exceeded otherwise).
bool base_additivity_check(const PlaneAutomorphism& f, const PlaneAutomorphism& g,
                           long depth_limit, const Budget& budget = {});

// Chain locations only (multiplicity-free comparison helper).
bool chain_prefix_matches(const BasePointChain& whole, const BasePointChain& prefix);

// Stable base-point chain of a walk: the tower of the composed stable prefix
// once it carries at least `depth` base points.
BasePointChain stable_chain(const PrefixTable& table, long depth, const Budget& budget = {});

struct DivergenceReport {
  long pairs = 0;
  long diverged = 0;
  std::vector<int> first_divergence_depth;  // 1-based; 0 = identical through depth
  double fraction() const { return pairs == 0 ? 0.0 : static_cast<double>(diverged) / pairs; }
};

// Pairs consecutive seeds, computes both stable chains to `depth`, and
// reports the first depth at which the towers part ways.
DivergenceReport chain_divergence_experiment(const std::shared_ptr<const MeasureSpec>& mu,
                                             const std::vector<std::uint64_t>& seeds, long depth,
                                             long n_max, const Budget& budget = {});

}  // namespace greenwalk
