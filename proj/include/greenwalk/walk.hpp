#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "greenwalk/amalgam.hpp"

namespace greenwalk {

// Deterministic counter-based generator: value at (seed, counter, attempt)
// is a pure function, identical across platforms and thread schedules.
std::uint64_t counter_rng(std::uint64_t seed, std::uint64_t counter, std::uint64_t attempt);

// Finitely supported step distribution with exact rational weights.
struct MeasureSpec {
  struct Atom {
    AmalgamWord word;
    Rational weight;
  };
  std::vector<Atom> atoms;
  bool symmetric = false;
  bool purely_loxodromic_checked = false;
};

// Validates weights (positive, exact sum 1), reduces atom words, and when
// `symmetric` is set checks closure under inversion with matching weights.
MeasureSpec make_measure(std::vector<MeasureSpec::Atom> atoms, bool symmetric,
                         bool purely_loxodromic_checked);

// One itinerary: i.i.d. atom indices drawn by exact inverse-CDF sampling
// from the counter-based source. Step n depends only on (seed, n).
class WalkPath {
 public:
  WalkPath(std::shared_ptr<const MeasureSpec> mu, std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  const MeasureSpec& measure() const { return *mu_; }
  int atom_index(long n) const;
  const AmalgamWord& atom_word(long n) const { return mu_->atoms[atom_index(n)].word; }

 private:
  std::shared_ptr<const MeasureSpec> mu_;
  std::uint64_t seed_;
  std::uint64_t denom_;
  std::vector<std::uint64_t> cumulative_;
};

// Reduced word of the left product of the first n steps.
AmalgamWord prefix_product(const WalkPath& path, long n);

// Frozen right end of the reduced prefix words, observed up to a horizon.
// Pair k is (a_k, e_k) counted from the right, above an optional innermost
// affine; t[k-1] is the first time after which those syllables never change
// again before the horizon (a lower-bound witness, not a proof).
struct StablePair {
  AffineSyllable a;
  ElementarySyllable e;
  PlaneAutomorphism h;  // a o e
  int degree;
};

struct PrefixTable {
  std::optional<AffineSyllable> leading_affine;
  std::vector<StablePair> pairs;
  std::vector<long> t;
  std::vector<long> len_of_n;       // reduced length at each n in [0, horizon]
  std::vector<long> l_of_n;         // distance to the frozen geodesic, per n
  std::vector<double> deg_log_of_n; // log deg f^n_omega, per n
  long horizon = 0;
  int requested_depth = 0;

  int achieved_depth() const { return static_cast<int>(pairs.size()); }
};

// Scans n <= n_max and reports the empirically frozen prefix to depth <= k.
PrefixTable stabilization_times(const WalkPath& path, int k, long n_max);

// Throws errc::not_stabilized when the table lacks `depth` frozen pairs.
void require_depth(const PrefixTable& table, int depth);

struct WalkStatistics {
  double drift = 0.0;             // mean reduced length / N
  double entropy_estimate = 0.0;  // -(1/n) mean log of the n-fold convolution mass
  int entropy_n = 0;              // convolution order actually used (0 = unavailable)
  std::vector<double> tracking;   // per seed: max over n in [10,N] of l(n)/log n
  std::vector<double> per_seed_drift;
};

WalkStatistics walk_statistics(const std::shared_ptr<const MeasureSpec>& mu,
                               const std::vector<std::uint64_t>& seeds, long n_steps,
                               int conv_order, std::size_t element_budget,
                               const Budget& budget = {});

}  // namespace greenwalk
