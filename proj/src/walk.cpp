#include "greenwalk/walk.hpp"

#include <cmath>
#include <unordered_map>

#include "greenwalk/json_io.hpp"

namespace greenwalk {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t counter_rng(std::uint64_t seed, std::uint64_t counter, std::uint64_t attempt) {
  std::uint64_t s = splitmix(seed ^ 0x6a09e667f3bcc909ULL);
  std::uint64_t v = splitmix(s + counter * 0x9e3779b97f4a7c15ULL + attempt * 0xda942042e4dd58b5ULL);
  return splitmix(v);
}

MeasureSpec make_measure(std::vector<MeasureSpec::Atom> atoms, bool symmetric,
                         bool purely_loxodromic_checked) {
  if (atoms.empty()) throw error(errc::config_error, "measure needs at least one atom");
  Rational total(0);
  for (auto& a : atoms) {
    if (a.weight.sign() <= 0) throw error(errc::config_error, "atom weights must be positive");
    total += a.weight;
    a.word = reduce_word(a.word);
  }
  if (total != Rational(1)) {
    throw error(errc::config_error, "atom weights must sum to 1 exactly, got " + total.to_string());
  }
  if (symmetric) {
    std::vector<std::pair<std::string, Rational>> keys;
    keys.reserve(atoms.size());
    for (const auto& a : atoms) keys.emplace_back(canonical_key(compose_word(a.word)), a.weight);
    for (const auto& a : atoms) {
      std::string inv_key = canonical_key(compose_word(invert_word(a.word)));
      bool found = false;
      for (const auto& [k, w] : keys) {
        if (k == inv_key && w == a.weight) {
          found = true;
          break;
        }
      }
      if (!found) {
        throw error(errc::config_error,
                    "measure flagged symmetric is not closed under inversion");
      }
    }
  }
  MeasureSpec mu;
  mu.atoms = std::move(atoms);
  mu.symmetric = symmetric;
  mu.purely_loxodromic_checked = purely_loxodromic_checked;
  return mu;
}

WalkPath::WalkPath(std::shared_ptr<const MeasureSpec> mu, std::uint64_t seed)
    : mu_(std::move(mu)), seed_(seed) {
  BigInt denom(1);
  for (const auto& a : mu_->atoms) denom = BigInt::lcm(denom, a.weight.den());
  if (!denom.fits_u64()) {
    throw error(errc::config_error, "common denominator of atom weights exceeds 64 bits");
  }
  denom_ = denom.to_u64();
  std::uint64_t acc = 0;
  for (const auto& a : mu_->atoms) {
    BigInt share = a.weight.num() * (denom / a.weight.den());
    acc += share.to_u64();
    cumulative_.push_back(acc);
  }
  if (cumulative_.back() != denom_) {
    throw error(errc::internal_error, "weight thresholds do not close");
  }
}

int WalkPath::atom_index(long n) const {
  std::uint64_t d = denom_;
  std::uint64_t u = 0;
  if (d == 1) {
    u = 0;
  } else {
    std::uint64_t rem = (0 - d) % d;  // 2^64 mod d
    std::uint64_t attempt = 0;
    for (;;) {
      std::uint64_t r = counter_rng(seed_, static_cast<std::uint64_t>(n), attempt++);
      if (rem != 0 && r >= (0 - rem)) continue;  // reject the biased tail
      u = r % d;
      break;
    }
  }
  for (size_t i = 0; i < cumulative_.size(); ++i) {
    if (u < cumulative_[i]) return static_cast<int>(i);
  }
  return static_cast<int>(cumulative_.size()) - 1;
}

AmalgamWord prefix_product(const WalkPath& path, long n) {
  WordAccumulator acc;
  for (long i = 0; i < n; ++i) acc.left_multiply(path.atom_word(i));
  return acc.word();
}

PrefixTable stabilization_times(const WalkPath& path, int k, long n_max) {
  if (k < 0 || n_max < 1) throw error(errc::config_error, "stabilization scan needs k >= 0, n_max >= 1");
  WordAccumulator acc;
  std::vector<long> last_change;        // per storage index, last step it changed
  std::vector<double> logdeg_prefix;    // prefix sums of log syllable degree
  PrefixTable table;
  table.requested_depth = k;
  table.horizon = n_max;
  table.len_of_n.assign(n_max + 1, 0);
  table.deg_log_of_n.assign(n_max + 1, 0.0);

  for (long n = 1; n <= n_max; ++n) {
    size_t touched = acc.left_multiply(path.atom_word(n - 1));
    const auto& rts = acc.word().storage();
    if (last_change.size() < rts.size()) last_change.resize(rts.size(), 0);
    for (size_t i = touched; i < rts.size(); ++i) last_change[i] = n;
    if (logdeg_prefix.size() < rts.size() + 1) logdeg_prefix.resize(rts.size() + 1, 0.0);
    for (size_t i = touched; i < rts.size(); ++i) {
      logdeg_prefix[i + 1] =
          logdeg_prefix[i] + std::log(static_cast<double>(syllable_degree(rts[i])));
    }
    table.len_of_n[n] = static_cast<long>(rts.size());
    table.deg_log_of_n[n] = rts.empty() ? 0.0 : logdeg_prefix[rts.size()];
  }

  const auto& rts = acc.word().storage();
  int offset = 0;
  if (!rts.empty() && syllable_is_affine(rts[0])) {
    offset = 1;
    table.leading_affine = std::get<AffineSyllable>(rts[0]);
  }
  const long final_len = static_cast<long>(rts.size());
  const long max_pairs = std::max(0L, (final_len - offset) / 2);

  // prefix maxima of the change times, and for each length L the last time
  // the word was shorter than L; both make t(depth) an O(1) lookup
  std::vector<long> prefmax_change(static_cast<size_t>(final_len) + 1, 0);
  for (long i = 0; i < final_len; ++i) {
    prefmax_change[static_cast<size_t>(i) + 1] =
        std::max(prefmax_change[static_cast<size_t>(i)], last_change[static_cast<size_t>(i)]);
  }
  long max_len_seen = 0;
  for (long n = 0; n <= n_max; ++n) max_len_seen = std::max(max_len_seen, table.len_of_n[n]);
  std::vector<long> level_last(static_cast<size_t>(max_len_seen) + 2, 0);
  for (long n = 0; n <= n_max; ++n) {
    level_last[static_cast<size_t>(table.len_of_n[n])] = n;
  }
  std::vector<long> last_below(static_cast<size_t>(max_len_seen) + 2, 0);
  for (long l = 1; l <= max_len_seen + 1; ++l) {
    last_below[static_cast<size_t>(l)] =
        std::max(last_below[static_cast<size_t>(l) - 1], level_last[static_cast<size_t>(l) - 1]);
  }
  auto t_for = [&](long depth) -> long {
    long needed = offset + 2 * depth;
    long t = std::max(1L, prefmax_change[static_cast<size_t>(needed)]);
    if (needed <= max_len_seen + 1) {
      t = std::max(t, last_below[static_cast<size_t>(needed)] + 1);
    }
    return t;
  };

  int depth_cap = static_cast<int>(std::min<long>(k, max_pairs));
  for (int depth = 1; depth <= depth_cap; ++depth) {
    long t_obs = t_for(depth);
    if (t_obs > n_max) break;
    size_t ei = static_cast<size_t>(offset + 2 * depth - 2);
    size_t ai = ei + 1;
    if (syllable_is_affine(rts[ei]) || !syllable_is_affine(rts[ai])) {
      throw error(errc::internal_error, "frozen prefix does not alternate");
    }
    StablePair sp{std::get<AffineSyllable>(rts[ai]), std::get<ElementarySyllable>(rts[ei]),
                  PlaneAutomorphism::identity(), 1};
    sp.h = compose(syllable_automorphism(Syllable(sp.a)),
                   syllable_automorphism(Syllable(sp.e)));
    sp.degree = sp.h.degree();
    table.pairs.push_back(std::move(sp));
    table.t.push_back(t_obs);
  }

  // excursion beyond the frozen prefix, measured against the full depth
  table.l_of_n.assign(n_max + 1, 0);
  long k_ptr = 0;
  for (long n = 1; n <= n_max; ++n) {
    while (k_ptr < max_pairs && t_for(k_ptr + 1) <= n) ++k_ptr;
    long stable_len = k_ptr > 0 ? offset + 2 * k_ptr : 0;
    table.l_of_n[n] = std::max(0L, (table.len_of_n[n] - stable_len) / 2);
  }
  return table;
}

void require_depth(const PrefixTable& table, int depth) {
  if (table.achieved_depth() < depth) {
    throw error(errc::not_stabilized,
                "stable prefix of depth " + std::to_string(depth) +
                    " not observed by horizon " + std::to_string(table.horizon));
  }
}

WalkStatistics walk_statistics(const std::shared_ptr<const MeasureSpec>& mu,
                               const std::vector<std::uint64_t>& seeds, long n_steps,
                               int conv_order, std::size_t element_budget, const Budget& budget) {
  if (seeds.empty() || n_steps < 1) {
    throw error(errc::config_error, "walk statistics need seeds and n >= 1");
  }
  WalkStatistics out;

  // Exact convolution powers mu^{*n}, elements keyed by exact composition.
  struct Entry {
    PlaneAutomorphism g;
    Rational p;
  };
  std::vector<Entry> conv;
  conv.push_back({PlaneAutomorphism::identity(), Rational(1)});
  int n_used = 0;
  std::vector<PlaneAutomorphism> atom_autos;
  for (const auto& a : mu->atoms) atom_autos.push_back(compose_word(a.word, budget));
  try {
    for (int step = 1; step <= conv_order; ++step) {
      std::unordered_map<std::string, size_t> index;
      std::vector<Entry> next;
      for (const auto& e : conv) {
        for (size_t ai = 0; ai < atom_autos.size(); ++ai) {
          PlaneAutomorphism g = compose(atom_autos[ai], e.g, budget);
          std::string key = canonical_key(g);
          auto it = index.find(key);
          if (it == index.end()) {
            index.emplace(std::move(key), next.size());
            next.push_back({std::move(g), e.p * mu->atoms[ai].weight});
          } else {
            next[it->second].p += e.p * mu->atoms[ai].weight;
          }
        }
      }
      if (next.size() > element_budget) break;
      conv = std::move(next);
      n_used = step;
    }
  } catch (const error& e) {
    if (e.code() != errc::budget_exceeded) throw;
    // exact convolution too heavy; keep the largest completed order
  }
  out.entropy_n = n_used;

  std::unordered_map<std::string, Rational> conv_map;
  for (const auto& e : conv) conv_map.emplace(canonical_key(e.g), e.p);

  double drift_sum = 0.0;
  double entropy_sum = 0.0;
  long entropy_count = 0;
  for (std::uint64_t seed : seeds) {
    WalkPath path(mu, seed);
    PrefixTable table = stabilization_times(path, 8, n_steps);
    double drift = static_cast<double>(table.len_of_n[n_steps]) / static_cast<double>(n_steps);
    drift_sum += drift;
    out.per_seed_drift.push_back(drift);
    double track = 0.0;
    for (long n = 10; n <= n_steps; ++n) {
      track = std::max(track,
                       static_cast<double>(table.l_of_n[n]) / std::log(static_cast<double>(n)));
    }
    out.tracking.push_back(track);
    if (n_used >= 1) {
      PlaneAutomorphism g = PlaneAutomorphism::identity();
      for (int i = 0; i < n_used; ++i) {
        g = compose(atom_autos[static_cast<size_t>(path.atom_index(i))], g, budget);
      }
      auto it = conv_map.find(canonical_key(g));
      if (it == conv_map.end()) {
        throw error(errc::internal_error, "sampled product missing from exact convolution");
      }
      entropy_sum += -it->second.log() / static_cast<double>(n_used);
      ++entropy_count;
    }
  }
  out.drift = drift_sum / static_cast<double>(seeds.size());
  out.entropy_estimate = entropy_count > 0 ? entropy_sum / static_cast<double>(entropy_count) : 0.0;
  return out;
}

}  // namespace greenwalk
