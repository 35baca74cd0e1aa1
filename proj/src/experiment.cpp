#include "greenwalk/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "greenwalk/parallel.hpp"

namespace greenwalk {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_u64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
  return buf;
}

// RFC 4180 rows: comma-joined fields, CRLF line ends.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw error(errc::config_error, "cannot open " + path + " for writing");
  }
  void row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << "\r\n";
  }

 private:
  std::ofstream out_;
};

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(errc::config_error, "cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

std::complex<double> complex_from_json(const json& j, size_t base) {
  return {j[base].get<double>(), j[base + 1].get<double>()};
}

std::uint64_t hash_mix(std::uint64_t h, unsigned char c) {
  h ^= c;
  h *= 1099511628211ULL;
  return h;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) h = hash_mix(h, c);
  return h;
}

std::vector<std::pair<std::complex<double>, std::complex<double>>> PointSpec::materialize()
    const {
  if (kind == Kind::List) return list;
  std::vector<std::pair<std::complex<double>, std::complex<double>>> pts;
  pts.reserve(static_cast<size_t>(count));
  for (long i = 0; i < count; ++i) {
    auto u = [&](std::uint64_t slot) {
      return 2.0 * (static_cast<double>(counter_rng(sample_seed, static_cast<std::uint64_t>(i),
                                                    slot) >>
                                        11) *
                    0x1.0p-53) -
             1.0;
    };
    std::complex<double> x = center_x + half_width * std::complex<double>(u(0), u(1));
    std::complex<double> y = center_y + half_width * std::complex<double>(u(2), u(3));
    pts.emplace_back(x, y);
  }
  return pts;
}

namespace {

AmalgamWord parse_map_expr(const json& j, const std::map<std::string, AmalgamWord>& maps) {
  require_keys(j, {"henon", "word", "affine", "inverse", "conjugate", "compose"}, "map expression");
  if (j.size() != 1) {
    throw error(errc::config_error, "map expression needs exactly one constructor");
  }
  if (j.contains("henon")) {
    const json& h = j.at("henon");
    require_keys(h, {"a", "p"}, "henon");
    GaussianRational a = gaussian_from_json(h.at("a"));
    UniPoly p;
    for (const auto& t : h.at("p")) {
      if (!t.is_array() || t.size() != 3) {
        throw error(errc::config_error, "henon polynomial term must be [k, re, im]");
      }
      p.add_term(t[0].get<int>(), {rational_from_json(t[1]), rational_from_json(t[2])});
    }
    if (p.degree() < 2) throw error(errc::config_error, "henon needs deg p >= 2");
    if (a.is_zero()) throw error(errc::config_error, "henon needs a != 0");
    AffineSyllable swap =
        make_affine(GaussianRational{}, GaussianRational{Rational(1)}, GaussianRational{Rational(1)},
                    GaussianRational{}, GaussianRational{}, GaussianRational{});
    ElementarySyllable e =
        make_elementary(-a, std::move(p), GaussianRational{Rational(1)}, GaussianRational{});
    return reduce_word(AmalgamWord::from_syllables({Syllable(swap), Syllable(e)}));
  }
  if (j.contains("word")) return reduce_word(word_from_json(j.at("word")));
  if (j.contains("affine")) {
    Syllable s = syllable_from_json(json{{"type", "affine"},
                                         {"matrix", j.at("affine").at("matrix")},
                                         {"translation", j.at("affine").at("translation")}});
    return reduce_word(AmalgamWord::from_syllables({s}));
  }
  auto lookup = [&](const std::string& name) -> const AmalgamWord& {
    auto it = maps.find(name);
    if (it == maps.end()) throw error(errc::config_error, "unknown map name: " + name);
    return it->second;
  };
  if (j.contains("inverse")) return invert_word(lookup(j.at("inverse").get<std::string>()));
  if (j.contains("conjugate")) {
    const json& c = j.at("conjugate");
    require_keys(c, {"of", "by"}, "conjugate");
    const AmalgamWord& of = lookup(c.at("of").get<std::string>());
    const AmalgamWord& by = lookup(c.at("by").get<std::string>());
    return word_mul(word_mul(by, of), invert_word(by));
  }
  const json& pair = j.at("compose");
  if (!pair.is_array() || pair.size() != 2) {
    throw error(errc::config_error, "compose expects [left, right]");
  }
  return word_mul(lookup(pair[0].get<std::string>()), lookup(pair[1].get<std::string>()));
}

SliceWindow parse_window(const json& j) {
  require_keys(j, {"origin", "ex", "ey", "nx", "ny"}, "render window");
  auto vec4 = [&](const char* key) {
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 4) {
      throw error(errc::config_error, std::string(key) + " must be [x_re, x_im, y_re, y_im]");
    }
    return v;
  };
  SliceWindow w;
  const json& o = vec4("origin");
  w.origin_x = complex_from_json(o, 0);
  w.origin_y = complex_from_json(o, 2);
  const json& ex = vec4("ex");
  w.ex_x = complex_from_json(ex, 0);
  w.ex_y = complex_from_json(ex, 2);
  const json& ey = vec4("ey");
  w.ey_x = complex_from_json(ey, 0);
  w.ey_y = complex_from_json(ey, 2);
  w.nx = j.at("nx").get<int>();
  w.ny = j.at("ny").get<int>();
  if (w.nx < 0 || w.ny < 0) throw error(errc::config_error, "render grid must be non-negative");
  return w;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  require_keys(j,
               {"maps", "measure", "family", "seeds", "budgets", "outputs", "threads", "map",
                "word", "points", "render"},
               "config");
  ExperimentConfig cfg;
  cfg.raw = j;

  if (j.contains("maps")) {
    if (!j.at("maps").is_object()) throw error(errc::config_error, "maps must be an object");
    // entries may reference each other in any order; resolve by passes
    std::map<std::string, json> pending;
    for (auto it = j.at("maps").begin(); it != j.at("maps").end(); ++it) {
      pending.emplace(it.key(), it.value());
    }
    auto deps_ready = [&](const json& expr) {
      auto known = [&](const json& name) {
        return cfg.named_maps.count(name.get<std::string>()) > 0;
      };
      if (expr.contains("inverse")) return known(expr.at("inverse"));
      if (expr.contains("conjugate")) {
        return known(expr.at("conjugate").at("of")) && known(expr.at("conjugate").at("by"));
      }
      if (expr.contains("compose")) {
        return known(expr.at("compose")[0]) && known(expr.at("compose")[1]);
      }
      return true;
    };
    while (!pending.empty()) {
      bool progress = false;
      for (auto it = pending.begin(); it != pending.end();) {
        if (!it->second.is_object() || !deps_ready(it->second)) {
          ++it;
          continue;
        }
        cfg.named_maps.emplace(it->first, parse_map_expr(it->second, cfg.named_maps));
        it = pending.erase(it);
        progress = true;
      }
      if (!progress) {
        throw error(errc::config_error,
                    "maps contain an unresolvable or cyclic reference starting at \"" +
                        pending.begin()->first + "\"");
      }
    }
  }

  if (j.contains("measure")) {
    const json& m = j.at("measure");
    require_keys(m, {"atoms", "symmetric", "purely_loxodromic"}, "measure");
    std::vector<MeasureSpec::Atom> atoms;
    for (const auto& a : m.at("atoms")) {
      require_keys(a, {"map", "word", "weight"}, "atom");
      if (!a.contains("weight")) throw error(errc::config_error, "atom needs a weight");
      Rational w = rational_from_json(a.at("weight"));
      AmalgamWord word;
      if (a.contains("map")) {
        std::string name = a.at("map").get<std::string>();
        auto it = cfg.named_maps.find(name);
        if (it == cfg.named_maps.end()) {
          throw error(errc::config_error, "atom refers to unknown map: " + name);
        }
        word = it->second;
      } else if (a.contains("word")) {
        word = word_from_json(a.at("word"));
      } else {
        throw error(errc::config_error, "atom needs map or word");
      }
      atoms.push_back({std::move(word), std::move(w)});
    }
    bool symmetric = m.contains("symmetric") && m.at("symmetric").get<bool>();
    bool lox = m.contains("purely_loxodromic") && m.at("purely_loxodromic").get<bool>();
    cfg.measure =
        std::make_shared<const MeasureSpec>(make_measure(std::move(atoms), symmetric, lox));
  }

  if (j.contains("family")) {
    const json& f = j.at("family");
    if (f.is_string()) {
      if (f.get<std::string>() != "derive-from-atoms") {
        throw error(errc::config_error, "family must be derive-from-atoms or a member list");
      }
      cfg.family_from_atoms = true;
    } else {
      require_keys(f, {"members"}, "family");
      cfg.family_from_atoms = false;
      for (const auto& mj : f.at("members")) {
        require_keys(mj, {"affine", "elementary"}, "family member");
        Syllable a = syllable_from_json(mj.at("affine"));
        Syllable e = syllable_from_json(mj.at("elementary"));
        if (!syllable_is_affine(a) || syllable_is_affine(e)) {
          throw error(errc::config_error, "family member needs affine + elementary parts");
        }
        cfg.declared_family.members.push_back(
            make_member(std::get<AffineSyllable>(a), std::get<ElementarySyllable>(e)));
      }
    }
  }

  if (j.contains("seeds")) {
    cfg.seeds.clear();
    const json& s = j.at("seeds");
    if (s.is_array()) {
      for (const auto& v : s) cfg.seeds.push_back(v.get<std::uint64_t>());
    } else {
      require_keys(s, {"from", "to"}, "seeds");
      std::uint64_t from = s.at("from").get<std::uint64_t>();
      std::uint64_t to = s.at("to").get<std::uint64_t>();
      if (to < from) throw error(errc::config_error, "seed range is empty");
      for (std::uint64_t v = from; v <= to; ++v) cfg.seeds.push_back(v);
    }
    if (cfg.seeds.empty()) throw error(errc::config_error, "seed list is empty");
  }

  if (j.contains("budgets")) {
    const json& b = j.at("budgets");
    require_keys(b,
                 {"n_max", "depth", "tol", "bit_budget", "green_budget", "conv_order",
                  "element_budget", "prefix_depth", "samples"},
                 "budgets");
    if (b.contains("n_max")) cfg.budgets.n_max = b.at("n_max").get<long>();
    if (b.contains("depth")) cfg.budgets.depth = b.at("depth").get<long>();
    if (b.contains("tol")) cfg.budgets.tol = b.at("tol").get<double>();
    if (b.contains("bit_budget")) cfg.budgets.bit_budget = b.at("bit_budget").get<long>();
    if (b.contains("green_budget")) cfg.budgets.green_budget = b.at("green_budget").get<long>();
    if (b.contains("conv_order")) cfg.budgets.conv_order = b.at("conv_order").get<int>();
    if (b.contains("element_budget"))
      cfg.budgets.element_budget = b.at("element_budget").get<long>();
    if (b.contains("prefix_depth")) cfg.budgets.prefix_depth = b.at("prefix_depth").get<int>();
    if (b.contains("samples")) cfg.budgets.samples = b.at("samples").get<long>();
  }

  if (j.contains("outputs")) {
    require_keys(j.at("outputs"), {"dir"}, "outputs");
    cfg.out_dir = j.at("outputs").at("dir").get<std::string>();
  }
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();

  if (j.contains("map")) {
    const json& m = j.at("map");
    if (m.is_object() && m.contains("ref")) {
      require_keys(m, {"ref"}, "map reference");
      std::string name = m.at("ref").get<std::string>();
      auto it = cfg.named_maps.find(name);
      if (it == cfg.named_maps.end()) {
        throw error(errc::config_error, "map refers to unknown name: " + name);
      }
      cfg.map = compose_word(it->second, cfg.bit_budget());
    } else {
      cfg.map = automorphism_from_json(m);
    }
  }
  if (j.contains("word")) cfg.word = word_from_json(j.at("word"));

  if (j.contains("points")) {
    const json& p = j.at("points");
    require_keys(p, {"list", "count", "center", "half_width", "seed"}, "points");
    if (p.contains("list")) {
      cfg.points.kind = PointSpec::Kind::List;
      for (const auto& row : p.at("list")) {
        if (!row.is_array() || row.size() != 4) {
          throw error(errc::config_error, "point rows are [x_re, x_im, y_re, y_im]");
        }
        cfg.points.list.emplace_back(complex_from_json(row, 0), complex_from_json(row, 2));
      }
      cfg.points.count = static_cast<long>(cfg.points.list.size());
    } else {
      cfg.points.kind = PointSpec::Kind::Box;
      if (p.contains("count")) cfg.points.count = p.at("count").get<long>();
      if (p.contains("seed")) cfg.points.sample_seed = p.at("seed").get<std::uint64_t>();
      if (p.contains("half_width")) cfg.points.half_width = p.at("half_width").get<double>();
      if (p.contains("center")) {
        const json& c = p.at("center");
        if (!c.is_array() || c.size() != 4) {
          throw error(errc::config_error, "points center is [x_re, x_im, y_re, y_im]");
        }
        cfg.points.center_x = complex_from_json(c, 0);
        cfg.points.center_y = complex_from_json(c, 2);
      }
    }
  }

  if (j.contains("render")) cfg.render = parse_window(j.at("render"));

  // the hash identifies the experiment: where results land and how many
  // threads computed them must not change it
  json identity = cfg.raw;
  identity.erase("outputs");
  identity.erase("threads");
  cfg.config_hash = fnv1a64(identity.dump());
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::config_error, "cannot read config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw error(errc::config_error, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

HFamily resolve_family(const ExperimentConfig& cfg) {
  if (!cfg.family_from_atoms) {
    if (cfg.declared_family.members.empty()) {
      throw error(errc::config_error, "declared family has no members");
    }
    return cfg.declared_family;
  }
  if (!cfg.measure) {
    throw error(errc::config_error, "derive-from-atoms needs a measure");
  }
  HFamily fam;
  std::set<std::string> seen;
  for (std::uint64_t seed : cfg.seeds) {
    WalkPath path(cfg.measure, seed);
    PrefixTable table = stabilization_times(path, cfg.budgets.prefix_depth, cfg.budgets.n_max);
    for (const auto& pair : table.pairs) {
      HMember m = make_member(pair.a, pair.e);
      std::string key = canonical_key(m.h);
      if (seen.insert(key).second) fam.members.push_back(std::move(m));
    }
  }
  if (fam.members.empty()) {
    throw error(errc::not_stabilized, "no stable pairs observed; cannot derive a family");
  }
  return fam;
}

namespace {

void prepare_out(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  set_parallel_threads(cfg.threads);
}

json params_to_json(const FiltrationParams& p) {
  json j;
  j["epsilon"] = p.epsilon.to_string();
  j["R"] = p.R.to_string();
  j["C_eps"] = p.C_eps.to_string();
  j["M_eps"] = p.M_eps.to_string();
  return j;
}

json family_to_json(const HFamily& fam) {
  json arr = json::array();
  for (const auto& m : fam.members) {
    json mj;
    mj["affine"] = syllable_to_json(Syllable(m.a));
    mj["elementary"] = syllable_to_json(Syllable(m.e));
    mj["degree"] = m.degree;
    arr.push_back(std::move(mj));
  }
  return arr;
}

std::string status_name(GreenValue::Status s) {
  return s == GreenValue::Status::Escaped ? "escaped" : "bounded_at_budget";
}

}  // namespace

void run_decompose(const ExperimentConfig& cfg) {
  if (!cfg.map) throw error(errc::config_error, "decompose needs a map");
  prepare_out(cfg);
  AmalgamWord w = jung_decompose(*cfg.map, cfg.bit_budget());
  bool roundtrip = compose_word(w, cfg.bit_budget()) == *cfg.map;
  if (!roundtrip) {
    throw error(errc::internal_error, "decomposition failed its round-trip proof");
  }
  json out;
  out["config_hash"] = fmt_u64(cfg.config_hash);
  out["word"] = word_to_json(w);
  out["syllables"] = w.size();
  out["degree"] = cfg.map->degree();
  out["round_trip"] = "OK";
  write_json_file(cfg.out_dir + "/decompose.json", out);
}

void run_classify(const ExperimentConfig& cfg) {
  prepare_out(cfg);
  AmalgamWord w;
  if (cfg.word) {
    w = reduce_word(*cfg.word);
  } else if (cfg.map) {
    w = jung_decompose(*cfg.map, cfg.bit_budget());
  } else {
    throw error(errc::config_error, "classify needs a word or a map");
  }
  WordClass cls = cyclic_reduce_classify(w);
  json out;
  out["config_hash"] = fmt_u64(cfg.config_hash);
  out["kind"] = cls.kind == WordClass::Loxodromic ? "loxodromic" : "elliptic";
  out["dynamical_degree"] = cls.dynamical_degree;
  out["translation_length"] = cls.translation_length;
  out["conjugator"] = word_to_json(cls.conjugator);
  out["cyclic_word"] = word_to_json(cls.cyclic_word);
  write_json_file(cfg.out_dir + "/classify.json", out);
}

void run_walk(const ExperimentConfig& cfg) {
  if (!cfg.measure) throw error(errc::config_error, "walk needs a measure");
  prepare_out(cfg);
  const int k = cfg.budgets.prefix_depth;
  CsvWriter csv(cfg.out_dir + "/walk.csv");
  std::vector<std::string> header{"seed", "n", "reduced_length", "l_n", "deg_log"};
  for (int i = 1; i <= k; ++i) header.push_back("t_" + std::to_string(i));
  csv.row(header);
  long stride = std::max(1L, cfg.budgets.n_max / 1000);
  json horizon_t = json::array();  // empirical freeze times are lower-bound
                                   // witnesses relative to the scan horizon
  for (std::uint64_t seed : cfg.seeds) {
    WalkPath path(cfg.measure, seed);
    PrefixTable table = stabilization_times(path, k, cfg.budgets.n_max);
    std::vector<std::string> t_cols;
    for (int i = 0; i < k; ++i) {
      t_cols.push_back(i < table.achieved_depth() ? std::to_string(table.t[i]) : "");
    }
    horizon_t.push_back({{"seed", fmt_u64(seed)}, {"t_k_at_horizon", table.t}});
    for (long n = stride; n <= cfg.budgets.n_max; n += stride) {
      std::vector<std::string> row{fmt_u64(seed), std::to_string(n),
                                   std::to_string(table.len_of_n[n]),
                                   std::to_string(table.l_of_n[n]),
                                   fmt_double(table.deg_log_of_n[n])};
      for (const auto& t : t_cols) row.push_back(t);
      csv.row(row);
    }
  }
  WalkStatistics st = walk_statistics(cfg.measure, cfg.seeds, cfg.budgets.n_max,
                                      cfg.budgets.conv_order,
                                      static_cast<size_t>(cfg.budgets.element_budget),
                                      cfg.bit_budget());
  json out;
  out["config_hash"] = fmt_u64(cfg.config_hash);
  out["drift"] = st.drift;
  out["entropy_estimate"] = st.entropy_estimate;
  out["entropy_n"] = st.entropy_n;
  out["tracking"] = st.tracking;
  out["per_seed_drift"] = st.per_seed_drift;
  out["horizon"] = cfg.budgets.n_max;
  out["stabilization"] = horizon_t;
  write_json_file(cfg.out_dir + "/walk_summary.json", out);
}

void run_filtration(const ExperimentConfig& cfg) {
  prepare_out(cfg);
  HFamily fam = resolve_family(cfg);
  FiltrationParams params = compute_constants(fam);
  CertificationReport fwd =
      certify_family_monte_carlo(fam, params, cfg.budgets.samples, cfg.seeds.front(), 700.0);
  CertificationReport inv =
      certify_inverse_clause(fam, params, cfg.budgets.samples, cfg.seeds.front() + 1, 700.0);
  json out;
  out["config_hash"] = fmt_u64(cfg.config_hash);
  out["seed"] = fmt_u64(cfg.seeds.front());
  out["family"] = family_to_json(fam);
  out["params"] = params_to_json(params);
  out["forward"] = {{"samples", fwd.samples}, {"failures", fwd.failures}};
  if (!fwd.witness.empty()) out["forward"]["witness"] = json::parse(fwd.witness);
  out["inverse"] = {{"samples", inv.samples}, {"failures", inv.failures}};
  if (!inv.witness.empty()) out["inverse"]["witness"] = json::parse(inv.witness);
  write_json_file(cfg.out_dir + "/filtration.json", out);
  if (fwd.failures > 0 || inv.failures > 0) {
    throw error(errc::certification_failure, "Monte Carlo certification found failures",
                (fwd.witness.empty() ? inv.witness : fwd.witness));
  }
}

void run_green(const ExperimentConfig& cfg) {
  if (!cfg.measure) throw error(errc::config_error, "green needs a measure");
  prepare_out(cfg);
  HFamily fam = resolve_family(cfg);
  FiltrationParams params = compute_constants(fam);
  auto pts = cfg.points.materialize();
  for (std::uint64_t seed : cfg.seeds) {
    WalkPath path(cfg.measure, seed);
    PrefixTable table =
        stabilization_times(path, std::max(cfg.budgets.prefix_depth, 48), cfg.budgets.n_max);
    StablePrefix prefix = StablePrefix::from_table(table);
    InfinityPoint dir = escape_direction(prefix);

    CsvWriter csv(cfg.out_dir + "/green_" + fmt_u64(seed) + ".csv");
    csv.row({"px_re", "px_im", "py_re", "py_im", "value", "error_bound", "status", "hit_time",
             "k_used"});
    std::vector<GreenValue> values(pts.size());
    parallel_for(pts.size(), [&](size_t i) {
      values[i] = green_evaluate(prefix, params, make_scaled(pts[i].first, pts[i].second),
                                 cfg.budgets.tol, cfg.budgets.green_budget);
    });
    for (size_t i = 0; i < pts.size(); ++i) {
      const GreenValue& g = values[i];
      csv.row({fmt_double(pts[i].first.real()), fmt_double(pts[i].first.imag()),
               fmt_double(pts[i].second.real()), fmt_double(pts[i].second.imag()),
               fmt_double(g.value), fmt_double(g.error_bound), status_name(g.status),
               std::to_string(g.hit_time), std::to_string(g.k_used)});
    }

    json side;
    side["config_hash"] = fmt_u64(cfg.config_hash);
    side["seed"] = fmt_u64(seed);
    side["params"] = params_to_json(params);
    side["tol"] = cfg.budgets.tol;
    side["budget"] = cfg.budgets.green_budget;
    side["escape_direction"] =
        json::array({gaussian_to_json(dir.x), gaussian_to_json(dir.y),
                     gaussian_to_json(GaussianRational{})});
    side["stable_depth"] = table.achieved_depth();

    if (cfg.render) {
      std::vector<GreenValue> grid =
          render_slice(prefix, params, *cfg.render, cfg.budgets.tol, cfg.budgets.green_budget);
      std::string raster_path = cfg.out_dir + "/green_" + fmt_u64(seed) + ".f32";
      std::ofstream raster(raster_path, std::ios::binary);
      for (const auto& cell : grid) {
        float v = static_cast<float>(cell.value);
        raster.write(reinterpret_cast<const char*>(&v), sizeof(float));
      }
      side["raster"] = {{"nx", cfg.render->nx},
                        {"ny", cfg.render->ny},
                        {"file", "green_" + fmt_u64(seed) + ".f32"},
                        {"dtype", "float32-le"},
                        {"order", "row-major"},
                        {"window",
                         {{"origin",
                           {cfg.render->origin_x.real(), cfg.render->origin_x.imag(),
                            cfg.render->origin_y.real(), cfg.render->origin_y.imag()}},
                          {"ex",
                           {cfg.render->ex_x.real(), cfg.render->ex_x.imag(),
                            cfg.render->ex_y.real(), cfg.render->ex_y.imag()}},
                          {"ey",
                           {cfg.render->ey_x.real(), cfg.render->ey_x.imag(),
                            cfg.render->ey_y.real(), cfg.render->ey_y.imag()}}}}};
    }
    write_json_file(cfg.out_dir + "/green_" + fmt_u64(seed) + ".json", side);
  }
}

void run_basepoints(const ExperimentConfig& cfg) {
  if (!cfg.measure) throw error(errc::config_error, "basepoints needs a measure");
  prepare_out(cfg);
  json chains = json::array();
  std::vector<BasePointChain> towers;
  for (std::uint64_t seed : cfg.seeds) {
    WalkPath path(cfg.measure, seed);
    PrefixTable table = stabilization_times(
        path, static_cast<int>(cfg.budgets.depth + 2), cfg.budgets.n_max);
    BasePointChain chain = stable_chain(table, cfg.budgets.depth, cfg.bit_budget());
    towers.push_back(chain);
    json cj;
    cj["seed"] = fmt_u64(seed);
    cj["p1"] = json::array({gaussian_to_json(chain.p1.x), gaussian_to_json(chain.p1.y),
                            gaussian_to_json(chain.p1.z)});
    json pts = json::array();
    for (const auto& p : chain.points) {
      // the chart id fixes the substitution of the next blow-up step
      std::string subst;
      if (p.chart == 'A') {
        subst = "(s,t) <- (s, s*(t + coord))";
      } else if (p.chart == 'B') {
        subst = "(s,t) <- (s*t, t)";
      } else {
        subst = p.chart == 'X' ? "chart X=1 of the plane, recentered by coord"
                               : "chart Y=1 of the plane";
      }
      pts.push_back({{"chart", std::string(1, p.chart)},
                     {"coord", gaussian_to_json(p.coord)},
                     {"multiplicity", p.multiplicity},
                     {"substitution", subst}});
    }
    cj["points"] = pts;
    chains.push_back(std::move(cj));
  }
  json out;
  out["config_hash"] = fmt_u64(cfg.config_hash);
  out["depth"] = cfg.budgets.depth;
  out["chains"] = chains;
  // pairwise first-divergence depths across consecutive seeds
  json div = json::array();
  long diverged = 0, pairs = 0;
  for (size_t i = 0; i + 1 < towers.size(); i += 2) {
    int depth = 0;
    if (!(towers[i].p1 == towers[i + 1].p1)) {
      depth = 1;
    } else {
      for (long d = 0; d < cfg.budgets.depth; ++d) {
        if (!towers[i].points[static_cast<size_t>(d)].same_location(
                towers[i + 1].points[static_cast<size_t>(d)])) {
          depth = static_cast<int>(d) + 1;
          break;
        }
      }
    }
    div.push_back(depth);
    ++pairs;
    if (depth > 0) ++diverged;
  }
  out["pair_divergence_depth"] = div;
  out["pairs"] = pairs;
  out["diverged"] = diverged;
  write_json_file(cfg.out_dir + "/basepoints.json", out);
}

void run_ergodic(const ExperimentConfig& cfg) {
  if (!cfg.measure) throw error(errc::config_error, "ergodic needs a measure");
  prepare_out(cfg);
  HFamily fam = resolve_family(cfg);
  FiltrationParams params = compute_constants(fam);
  auto pts = cfg.points.materialize();
  DichotomyReport rep = escape_dichotomy_experiment(cfg.measure, cfg.seeds, pts,
                                                    cfg.budgets.n_max, params);
  CsvWriter csv(cfg.out_dir + "/ergodic.csv");
  csv.row({"seed", "px_re", "px_im", "py_re", "py_im", "status", "hit_time", "bound_radius",
           "lambda_plus", "lambda_minus"});
  for (const auto& row : rep.rows) {
    std::string lp = "", lm = "";
    if (!row.escaped) {
      WalkPath path(cfg.measure, row.seed);
      try {
        LyapunovReport ly = lyapunov(path, row.px, row.py, cfg.budgets.n_max, params,
                                     cfg.bit_budget());
        lp = fmt_double(ly.lambda_plus);
        lm = fmt_double(ly.lambda_minus);
      } catch (const error&) {
        // orbit left the bounded regime mid-segment: leave the columns empty
      }
    }
    csv.row({fmt_u64(row.seed), fmt_double(row.px.real()), fmt_double(row.px.imag()),
             fmt_double(row.py.real()), fmt_double(row.py.imag()),
             row.escaped ? "escaped" : "bounded_at_budget", std::to_string(row.hit_time),
             fmt_double(rep.bound_radius), lp, lm});
  }
  JacobianDrift drift = jacobian_drift(*cfg.measure);
  json out;
  out["config_hash"] = fmt_u64(cfg.config_hash);
  out["escaped"] = rep.escaped_count;
  out["total"] = static_cast<long>(rep.rows.size());
  out["bound_radius"] = rep.bound_radius;
  out["jacobian_drift"] = drift.drift;
  out["volume_class"] = drift.classification == VolumeClass::Conservative
                            ? "conservative"
                            : (drift.classification == VolumeClass::Dissipative ? "dissipative"
                                                                                : "expanding");
  write_json_file(cfg.out_dir + "/ergodic_summary.json", out);
}

int exit_code_for(const error& e) {
  switch (e.code()) {
    case errc::config_error:
      return 2;
    case errc::certification_failure:
    case errc::cone_obstruction:
      return 3;
    case errc::budget_exceeded:
      return 4;
    default:
      return 1;
  }
}

}  // namespace greenwalk
