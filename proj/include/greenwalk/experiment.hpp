#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "greenwalk/blowup.hpp"
#include "greenwalk/ergodic.hpp"
#include "greenwalk/green.hpp"
#include "greenwalk/json_io.hpp"

namespace greenwalk {

struct Budgets {
  long n_max = 10000;
  long depth = 8;  // blow-up tower depth
  double tol = 1e-9;
  long bit_budget = 1L << 20;
  long green_budget = 10000;
  int conv_order = 6;
  long element_budget = 1000000;
  int prefix_depth = 8;
  long samples = 100000;  // Monte Carlo certification size
};

struct PointSpec {
  enum class Kind { List, Box } kind = Kind::Box;
  long count = 100;
  std::uint64_t sample_seed = 1;
  std::complex<double> center_x{0.0, 0.0}, center_y{0.0, 0.0};
  double half_width = 2.0;
  std::vector<std::pair<std::complex<double>, std::complex<double>>> list;

  std::vector<std::pair<std::complex<double>, std::complex<double>>> materialize() const;
};

// One schema for every subcommand; unknown keys are errors.
struct ExperimentConfig {
  json raw;
  std::string out_dir = "out";
  int threads = 0;
  std::map<std::string, AmalgamWord> named_maps;
  std::shared_ptr<const MeasureSpec> measure;
  bool family_from_atoms = true;
  HFamily declared_family;
  std::vector<std::uint64_t> seeds{1};
  Budgets budgets;
  std::optional<PlaneAutomorphism> map;
  std::optional<AmalgamWord> word;
  PointSpec points;
  std::optional<SliceWindow> render;
  std::uint64_t config_hash = 0;

  Budget bit_budget() const { return Budget{budgets.bit_budget}; }
};

ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config_file(const std::string& path);
std::uint64_t fnv1a64(const std::string& data);

// Derives the contracting family from the walk's frozen prefixes across the
// configured seeds (or returns the declared family).
HFamily resolve_family(const ExperimentConfig& cfg);

// Subcommand drivers; artifacts land in cfg.out_dir. Throwing `error` maps
// to the documented exit codes in the CLI wrapper.
void run_decompose(const ExperimentConfig& cfg);
void run_classify(const ExperimentConfig& cfg);
void run_walk(const ExperimentConfig& cfg);
void run_filtration(const ExperimentConfig& cfg);
void run_green(const ExperimentConfig& cfg);
void run_basepoints(const ExperimentConfig& cfg);
void run_ergodic(const ExperimentConfig& cfg);

int exit_code_for(const error& e);

}  // namespace greenwalk
