// End-to-end acceptance suite. Each check prints one [PASS]/[FAIL] line;
// the process exits nonzero when any check fails. The CLI determinism check
// needs the binary path: --cli <path>.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "greenwalk/blowup.hpp"
#include "greenwalk/ergodic.hpp"
#include "greenwalk/experiment.hpp"
#include "greenwalk/green.hpp"
#include "test_helpers.hpp"

using namespace greenwalk;
using namespace greenwalk::testing;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
              detail.empty() ? "" : " — ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double elapsed_s(const std::chrono::steady_clock::time_point& from) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - from).count();
}

// ---- shared families -------------------------------------------------------

AffineSyllable mixing_affine() {
  // [[1,1],[-1,1]]: moves both special directions off {[1:0:0],[0:1:0]}
  return make_affine(gq(1), gq(1), gq(-1), gq(1), gq(0), gq(0));
}

AmalgamWord conjugated_word(const AmalgamWord& of, const AffineSyllable& by) {
  return word_mul(word_mul(AmalgamWord::from_syllables({Syllable(by)}), of),
                  AmalgamWord::from_syllables({Syllable(affine_inverse(by))}));
}

// symmetric ping-pong measure on {h, h^-1, g, g^-1}, g = c h c^-1
std::shared_ptr<const MeasureSpec> pingpong_measure() {
  AmalgamWord h = henon_word();
  AmalgamWord g = conjugated_word(h, mixing_affine());
  std::vector<MeasureSpec::Atom> atoms;
  atoms.push_back({h, Rational(1, 4)});
  atoms.push_back({invert_word(h), Rational(1, 4)});
  atoms.push_back({g, Rational(1, 4)});
  atoms.push_back({invert_word(g), Rational(1, 4)});
  return std::make_shared<const MeasureSpec>(make_measure(std::move(atoms), true, true));
}

// forward two-letter measure on {h, g}: no cancellations, frozen prefixes
std::shared_ptr<const MeasureSpec> forward_measure() {
  AmalgamWord h = henon_word();
  AmalgamWord g = conjugated_word(h, mixing_affine());
  std::vector<MeasureSpec::Atom> atoms;
  atoms.push_back({h, Rational(1, 2)});
  atoms.push_back({g, Rational(1, 2)});
  return std::make_shared<const MeasureSpec>(make_measure(std::move(atoms), false, true));
}

// h and its conjugate by a large translation: disjoint bounded-orbit sets
std::shared_ptr<const MeasureSpec> disjoint_k_measure() {
  AmalgamWord h = henon_word();
  AffineSyllable tau = make_affine(gq(1), gq(0), gq(0), gq(1), gq(100), gq(100));
  std::vector<MeasureSpec::Atom> atoms;
  atoms.push_back({h, Rational(1, 2)});
  atoms.push_back({conjugated_word(h, tau), Rational(1, 2)});
  return std::make_shared<const MeasureSpec>(make_measure(std::move(atoms), false, true));
}

// all (a, e) pairs occurring anywhere in a reduced word
void collect_pairs(const AmalgamWord& w, std::map<std::string, HMember>* out) {
  size_t offset = (!w.empty() && syllable_is_affine(w.from_right(0))) ? 1 : 0;
  for (size_t i = offset; i + 1 < w.size(); i += 2) {
    if (syllable_is_affine(w.from_right(i)) || !syllable_is_affine(w.from_right(i + 1))) break;
    HMember m = make_member(std::get<AffineSyllable>(w.from_right(i + 1)),
                            std::get<ElementarySyllable>(w.from_right(i)));
    out->emplace(canonical_key(m.h), std::move(m));
  }
}

// family covering both the frozen prefixes and the transient pairs of the
// walk words, so the telescoping constants apply to every factor in sight
HFamily reachable_family(const std::shared_ptr<const MeasureSpec>& mu,
                         const std::vector<std::uint64_t>& seeds, long n_max) {
  std::map<std::string, HMember> pairs;
  for (std::uint64_t seed : seeds) {
    WalkPath path(mu, seed);
    WordAccumulator acc;
    for (long n = 1; n <= n_max; ++n) {
      acc.left_multiply(path.atom_word(n - 1));
      collect_pairs(acc.word(), &pairs);
    }
  }
  HFamily fam;
  for (auto& [k, m] : pairs) fam.members.push_back(std::move(m));
  if (fam.members.empty()) throw error(errc::not_stabilized, "no pairs reachable");
  return fam;
}

// ---- criteria --------------------------------------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  TestRng rng(20260808);
  long ok = 0;
  const int total = 500;
  for (int trial = 0; trial < total; ++trial) {
    // degree caps spread over 4..64 so the sample spans the whole range
    long cap = 1L << rng.range(2, 6);
    AmalgamWord w = random_reduced_word(rng, 5, cap);
    PlaneAutomorphism f = compose_word(w);
    AmalgamWord back = jung_decompose(f);
    if (compose_word(back) == f) ++ok;
  }
  double secs = elapsed_s(t0);
  std::ostringstream detail;
  detail << ok << "/" << total << " coefficient-exact round trips in " << secs << " s";
  report(1, "normal-form round trip on 500 random words", ok == total && secs < 120.0,
         detail.str());
}

void criterion_2() {
  TestRng rng(777);
  // pool of contracting-family style pairs
  std::vector<std::pair<AffineSyllable, ElementarySyllable>> pool;
  for (int i = 0; i < 8; ++i) {
    pool.emplace_back(random_affine_not_elementary(rng), random_elementary_not_affine(rng, 3));
  }
  long ok = 0;
  const int total = 200;
  for (int trial = 0; trial < total; ++trial) {
    int len = static_cast<int>(rng.range(1, 4));
    std::vector<Syllable> sy;
    long expect = 1;
    for (int i = 0; i < len; ++i) {
      const auto& [a, e] = pool[static_cast<size_t>(rng.range(0, 7))];
      if (expect * e.poly_degree() > 128) break;
      expect *= e.poly_degree();
      sy.emplace_back(a);
      sy.emplace_back(e);
    }
    if (sy.empty()) {
      const auto& [a, e] = pool[0];
      sy.emplace_back(a);
      sy.emplace_back(e);
      expect = e.poly_degree();
    }
    AmalgamWord w = reduce_word(AmalgamWord::from_syllables(std::move(sy)));
    if (compose_word(w).degree() == expect) ++ok;
  }
  std::ostringstream detail;
  detail << ok << "/" << total << " words with degree equal to the elementary product";
  report(2, "degree multiplicativity on alternating words", ok == total, detail.str());
}

struct PingPongContext {
  std::shared_ptr<const MeasureSpec> mu;
  HFamily family;
  FiltrationParams params;
};

PingPongContext g_ctx;

void criterion_3() {
  g_ctx.mu = pingpong_measure();
  g_ctx.family = reachable_family(g_ctx.mu, {1, 2, 3, 4, 5}, 600);
  g_ctx.params = compute_constants(g_ctx.family);
  CertificationReport fwd =
      certify_family_monte_carlo(g_ctx.family, g_ctx.params, 100000, 101, 700.0);
  CertificationReport inv =
      certify_inverse_clause(g_ctx.family, g_ctx.params, 100000, 102, 700.0);
  std::ostringstream detail;
  detail << g_ctx.family.members.size() << " members, eps = " << g_ctx.params.epsilon.to_string()
         << ", R = " << g_ctx.params.R.to_string() << "; forward failures " << fwd.failures
         << "/" << fwd.samples << ", inverse failures " << inv.failures << "/" << inv.samples;
  report(3, "Monte Carlo filtration certification", fwd.failures == 0 && inv.failures == 0,
         detail.str());
}

void criterion_4() {
  // two-path residual across the ping-pong walk
  long checked = 0, ok = 0;
  const double md = g_ctx.params.M_d;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    WalkPath path(g_ctx.mu, seed);
    PrefixTable table = stabilization_times(path, 10, 4000);
    if (table.achieved_depth() < 8) continue;
    StablePrefix prefix = StablePrefix::from_table(table);
    PlaneAutomorphism pull = PlaneAutomorphism::identity();
    PlaneAutomorphism push = PlaneAutomorphism::identity();
    if (prefix.leading_affine.has_value()) {
      pull = syllable_automorphism(syllable_inverse(Syllable(*prefix.leading_affine)));
      push = syllable_automorphism(Syllable(*prefix.leading_affine));
    }
    for (int pt = 0; pt < 200; ++pt) {
      ScaledPoint v =
          sample_vplus(g_ctx.params, 9000 + seed, static_cast<std::uint64_t>(pt), 500.0);
      ScaledPoint q = eval_scaled(pull, v);
      ScaledPoint q_shift = eval_scaled(push, q);
      for (int k = 2; k <= 8; k += 3) {
        std::vector<HMember> factors(prefix.factors.begin(), prefix.factors.begin() + k);
        USequenceResult uk = u_sequence(factors, q_shift, g_ctx.params, 0.0, k);
        if (!uk.escaped) continue;
        double dk = std::pow(2.0, k);
        long tk = table.t[static_cast<size_t>(k - 1)];
        for (long n = tk; n < tk + 2; ++n) {
          double direct = direct_normalized_log(prefix_product(path, n), q);
          ++checked;
          if (std::abs(direct - uk.u) <= 2.0 * md / dk + 1e-9) ++ok;
        }
      }
    }
  }
  bool two_path = checked >= 1000 && ok == checked;

  // degenerate case: the single-map functional equation at 1e-6
  PlaneAutomorphism h = henon_quadratic();
  long feq_ok = 0, feq_checked = 0;
  TestRng rng(4242);
  while (feq_checked < 100) {
    double x = rng.range(-500, 500) / 100.0;
    double y = rng.range(200, 900) / 100.0 * (rng.range(0, 1) ? 1.0 : -1.0);
    ScaledPoint q = make_scaled({x, 0.0}, {y, 0.0});
    GreenValue gq_val = classical_green(h, q, 1e-9, 4000);
    if (gq_val.status != GreenValue::Status::Escaped) continue;
    GreenValue ghq = classical_green(h, eval_scaled(h, q), 1e-9, 4000);
    ++feq_checked;
    if (ghq.status == GreenValue::Status::Escaped &&
        std::abs(ghq.value - 2.0 * gq_val.value) <= 1e-6) {
      ++feq_ok;
    }
  }
  std::ostringstream detail;
  detail << ok << "/" << checked << " residuals within 2M/d^k; functional equation " << feq_ok
         << "/" << feq_checked << " within 1e-6";
  report(4, "two-route escape-value convergence", two_path && feq_ok == feq_checked,
         detail.str());
}

void criterion_5() {
  long ok = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    WalkPath path(g_ctx.mu, seed);
    PrefixTable table = stabilization_times(path, 48, 4000);
    require_depth(table, 40);
    StablePrefix prefix = StablePrefix::from_table(table);
    PlaneAutomorphism pull = PlaneAutomorphism::identity();
    if (prefix.leading_affine.has_value()) {
      pull = syllable_automorphism(syllable_inverse(Syllable(*prefix.leading_affine)));
    }
    for (int pt = 0; pt < 50; ++pt) {
      ScaledPoint v =
          sample_vplus(g_ctx.params, 7100 + seed, static_cast<std::uint64_t>(pt), 600.0);
      ScaledPoint q = eval_scaled(pull, v);
      GreenValue g = green_evaluate(prefix, g_ctx.params, q, 1e-9, 10000);
      ++total;
      if (g.status == GreenValue::Status::Escaped && g.value > 0.0) ++ok;
    }
  }
  std::ostringstream detail;
  detail << ok << "/" << total << " sampled points escaped across 20 seeds";
  report(5, "escape region surrounds infinity off one direction", ok == total && total == 1000,
         detail.str());
}

void criterion_6() {
  long t1_ok = 0, t3_ok = 0;
  double max_tracking = 0.0;
  bool tracking_finite = true;
  const int seeds = 100;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    WalkPath path(g_ctx.mu, seed);
    PrefixTable table = stabilization_times(path, 3, 10000);
    if (table.achieved_depth() >= 1) ++t1_ok;
    if (table.achieved_depth() >= 3) ++t3_ok;
    double track = 0.0;
    for (long n = 10; n <= 10000; ++n) {
      track = std::max(track,
                       static_cast<double>(table.l_of_n[n]) / std::log(static_cast<double>(n)));
    }
    if (!std::isfinite(track)) tracking_finite = false;
    max_tracking = std::max(max_tracking, track);
  }
  std::ostringstream detail;
  detail << "t_1 observed " << t1_ok << "/100, t_3 observed " << t3_ok
         << "/100, max l(n)/log n = " << max_tracking;
  report(6, "prefix stabilization at horizon 10^4",
         t1_ok == seeds && t3_ok >= 95 && tracking_finite, detail.str());
}

void criterion_7() {
  // (a) quadratic tower identities
  BasePointChain hc = base_point_chain(henon_quadratic(), 16);
  bool noether = hc.complete && hc.count() == 3 && hc.multiplicity_sum() == 3 &&
                 hc.multiplicity_square_sum() == 3;

  // (b) additivity on 50 random pairs with distinct special points
  TestRng rng(99);
  std::vector<PlaneAutomorphism> pool;
  std::vector<AmalgamWord> pool_words;
  {
    std::vector<UniPoly> ps;
    ps.push_back(y_squared());
    UniPoly p2 = y_squared();
    p2.add_term(1, gq(1));
    ps.push_back(p2);
    UniPoly p3 = y_squared();
    p3.add_term(0, gq(-1));
    ps.push_back(p3);
    for (const auto& p : ps) {
      for (long a = 1; a <= 2; ++a) {
        AmalgamWord base = reduce_word(AmalgamWord::from_syllables(
            {Syllable(swap_xy()), Syllable(henon_elementary(p, gq(a)))}));
        pool_words.push_back(base);
        for (int c = 0; c < 3; ++c) {
          pool_words.push_back(conjugated_word(base, random_affine_not_elementary(rng)));
        }
      }
    }
    for (const auto& w : pool_words) pool.push_back(compose_word(w));
  }
  long pairs_done = 0, pairs_ok = 0;
  size_t fi = 0, gi = 1;
  while (pairs_done < 50) {
    fi = (fi + 1) % pool.size();
    gi = (gi + 3) % pool.size();
    const PlaneAutomorphism& f = pool[fi];
    const PlaneAutomorphism& g = pool[gi];
    PlaneAutomorphism f_inv = compose_word(invert_word(pool_words[fi]));
    if (indeterminacy_point(g) == indeterminacy_point(f_inv)) continue;
    ++pairs_done;
    if (base_additivity_check(f, g, 40)) ++pairs_ok;
  }

  // (c) tower prefix consistency along a frozen walk, depth 4
  auto mu = forward_measure();
  long prefix_ok = 0, prefix_total = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    WalkPath path(mu, seed);
    PrefixTable table = stabilization_times(path, 6, 64);
    require_depth(table, 2);
    BasePointChain stable = stable_chain(table, 4);
    long tau = table.t[1];  // two frozen pairs carry >= 4 tower points
    for (long n = tau; n < tau + 3; ++n) {
      AmalgamWord wn = prefix_product(path, n);
      BasePointChain direct = base_point_chain(compose_word(wn), 4);
      ++prefix_total;
      bool same = direct.p1 == stable.p1 && direct.count() >= 4;
      for (int i = 0; same && i < 4; ++i) {
        same = direct.points[static_cast<size_t>(i)].same_location(
            stable.points[static_cast<size_t>(i)]);
      }
      if (same) ++prefix_ok;
    }
  }
  std::ostringstream detail;
  detail << "Noether(3,3) " << (noether ? "ok" : "violated") << "; additivity " << pairs_ok << "/"
         << pairs_done << "; tower prefix " << prefix_ok << "/" << prefix_total
         << " at depth 4 over 20 seeds";
  report(7, "base-point engine identities",
         noether && pairs_ok == 50 && prefix_ok == prefix_total, detail.str());
}

void criterion_8() {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 100; ++s) seeds.push_back(s);
  DivergenceReport rep = chain_divergence_experiment(g_ctx.mu, seeds, 6, 3000);
  std::ostringstream detail;
  detail << rep.diverged << "/" << rep.pairs
         << " independent pairs diverge by depth 6 (threshold 90%, empirical)";
  report(8, "tower divergence across independent walks", rep.pairs == 50 && rep.fraction() >= 0.90,
         detail.str());
}

void criterion_9() {
  JacobianDrift drift = jacobian_drift(*g_ctx.mu);
  bool drift_exact = drift.classification == VolumeClass::Conservative && drift.drift == 0.0;
  long ok = 0;
  const int segments = 50;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= segments; ++seed) {
    WalkPath path(g_ctx.mu, seed);
    LyapunovReport rep = lyapunov(path, {0.0, 0.0}, {0.0, 0.0}, 10000, g_ctx.params);
    double gap = std::abs(rep.lambda_plus + rep.lambda_minus - drift.drift);
    worst = std::max(worst, gap);
    if (gap <= 1e-6 && rep.lambda_plus >= rep.lambda_minus) ++ok;
  }
  std::ostringstream detail;
  detail << ok << "/" << segments << " segments, worst |sum - drift| = " << worst
         << ", symmetric drift exactly zero: " << (drift_exact ? "yes" : "no");
  report(9, "exponent sum equals the mean log Jacobian", drift_exact && ok == segments,
         detail.str());
}

void criterion_10() {
  // disjoint bounded sets: everything escapes fast
  auto mu_d = disjoint_k_measure();
  HFamily fam = reachable_family(mu_d, {11, 12}, 200);
  FiltrationParams params = compute_constants(fam);
  std::vector<std::pair<std::complex<double>, std::complex<double>>> pts;
  for (int i = 0; i < 500; ++i) {
    auto u = [&](int slot) {
      return 10.0 * (static_cast<double>(counter_rng(31337, static_cast<std::uint64_t>(i),
                                                     static_cast<std::uint64_t>(slot)) >>
                                         11) *
                         0x1.0p-53 -
                     0.5);
    };
    pts.emplace_back(std::complex<double>(u(0), 0.0), std::complex<double>(u(1), 0.0));
  }
  DichotomyReport rep = escape_dichotomy_experiment(mu_d, {21, 22}, pts, 1000, params);
  bool all_escaped = rep.escaped_count == static_cast<long>(rep.rows.size());
  long slowest = 0;
  for (const auto& row : rep.rows) slowest = std::max(slowest, row.hit_time);

  // common fixed point: the origin never escapes
  FiltrationParams pp = g_ctx.params;
  std::vector<std::pair<std::complex<double>, std::complex<double>>> origin;
  origin.emplace_back(std::complex<double>(0.0, 0.0), std::complex<double>(0.0, 0.0));
  DichotomyReport fixed =
      escape_dichotomy_experiment(g_ctx.mu, {1, 2, 3, 4, 5}, origin, 1000, pp);
  bool never = fixed.escaped_count == 0;

  std::ostringstream detail;
  detail << rep.escaped_count << "/" << rep.rows.size()
         << " points certified escaped (slowest hit " << slowest << "); fixed point escaped in "
         << fixed.escaped_count << "/5 runs";
  report(10, "escape dichotomy for separated and fixed-point families", all_escaped && never,
         detail.str());
}

// ---- determinism through the CLI -------------------------------------------

json pingpong_maps_json() {
  json maps;
  maps["h"] = {{"henon",
                {{"a", json::array({"1/1", "0/1"})},
                 {"p", json::array({json::array({2, "1/1", "0/1"})})}}}};
  maps["c"] = {{"affine",
                {{"matrix", json::array({json::array({json::array({"1/1", "0/1"}),
                                                      json::array({"1/1", "0/1"})}),
                                         json::array({json::array({"-1/1", "0/1"}),
                                                      json::array({"1/1", "0/1"})})})},
                 {"translation", json::array({json::array({"0/1", "0/1"}),
                                              json::array({"0/1", "0/1"})})}}}};
  maps["g"] = {{"conjugate", {{"of", "h"}, {"by", "c"}}}};
  maps["hi"] = {{"inverse", "h"}};
  maps["gi"] = {{"inverse", "g"}};
  return maps;
}

json measure_json() {
  json m;
  m["atoms"] = json::array({json{{"map", "h"}, {"weight", "1/4"}},
                            json{{"map", "hi"}, {"weight", "1/4"}},
                            json{{"map", "g"}, {"weight", "1/4"}},
                            json{{"map", "gi"}, {"weight", "1/4"}}});
  m["symmetric"] = true;
  m["purely_loxodromic"] = true;
  return m;
}

bool run_cli(const std::string& cli, const std::string& sub, const fs::path& config,
             const fs::path& out) {
  std::string cmd = "\"" + cli + "\" " + sub + " --config \"" + config.string() + "\" --out \"" +
                    out.string() + "\" > /dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

bool dirs_identical(const fs::path& a, const fs::path& b, std::string* why) {
  std::vector<fs::path> rel;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) rel.push_back(fs::relative(e.path(), a));
  }
  size_t count_b = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) {
    if (e.is_regular_file()) ++count_b;
  }
  if (rel.size() != count_b) {
    *why = "file count differs";
    return false;
  }
  for (const auto& r : rel) {
    std::ifstream fa(a / r, std::ios::binary), fb(b / r, std::ios::binary);
    if (!fa || !fb) {
      *why = "missing " + r.string();
      return false;
    }
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str()) {
      *why = "byte mismatch in " + r.string();
      return false;
    }
  }
  return true;
}

void criterion_11(const std::string& cli) {
  if (cli.empty()) {
    report(11, "CLI determinism", false, "no --cli path supplied");
    return;
  }
  fs::path tmp = fs::temp_directory_path() / "greenwalk_acceptance";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  json common;
  common["maps"] = pingpong_maps_json();
  common["measure"] = measure_json();
  common["family"] = "derive-from-atoms";
  common["budgets"] = {{"n_max", 1500},        {"tol", 1e-7},
                       {"green_budget", 2000}, {"prefix_depth", 6},
                       {"samples", 2000},      {"depth", 4},
                       {"conv_order", 3}};

  std::map<std::string, json> configs;
  {
    json c = common;
    c["map"] = {{"ref", "h"}};
    configs["decompose"] = c;
    configs["classify"] = c;
  }
  {
    json c = common;
    c["seeds"] = json::array({1, 2, 3});
    c["budgets"]["n_max"] = 400;
    configs["walk"] = c;
  }
  {
    json c = common;
    c["seeds"] = json::array({1, 2});
    configs["filtration"] = c;
  }
  {
    json c = common;
    c["seeds"] = json::array({1, 2});
    c["points"] = {{"count", 24},
                   {"seed", 5},
                   {"half_width", 3.0},
                   {"center", json::array({0.0, 0.0, 0.0, 0.0})}};
    c["render"] = {{"origin", json::array({-2.0, 0.0, -2.0, 0.0})},
                   {"ex", json::array({4.0, 0.0, 0.0, 0.0})},
                   {"ey", json::array({0.0, 0.0, 4.0, 0.0})},
                   {"nx", 12},
                   {"ny", 12}};
    configs["green"] = c;
  }
  {
    json c = common;
    c["seeds"] = json::array({1, 2, 3, 4});
    c["budgets"]["n_max"] = 600;
    configs["basepoints"] = c;
  }
  {
    json c = common;
    c["seeds"] = json::array({1, 2});
    c["budgets"]["n_max"] = 300;
    c["points"] = {{"count", 10},
                   {"seed", 9},
                   {"half_width", 2.0},
                   {"center", json::array({0.0, 0.0, 0.0, 0.0})}};
    configs["ergodic"] = c;
  }

  bool all_ok = true;
  std::ostringstream detail;
  for (const auto& [sub, cfg] : configs) {
    fs::path cfg_path = tmp / (sub + ".json");
    std::ofstream(cfg_path) << cfg.dump(2);
    fs::path out_a = tmp / (sub + "_a"), out_b = tmp / (sub + "_b");
    bool ok_a = run_cli(cli, sub, cfg_path, out_a);
    bool ok_b = run_cli(cli, sub, cfg_path, out_b);
    std::string why;
    bool same = ok_a && ok_b && dirs_identical(out_a, out_b, &why);
    if (!same) {
      all_ok = false;
      detail << sub << ": " << (ok_a && ok_b ? why : "nonzero exit") << "; ";
    }
  }
  if (all_ok) detail << "7 subcommands, byte-identical reruns";
  report(11, "CLI determinism across reruns", all_ok, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
  }
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11(cli);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
