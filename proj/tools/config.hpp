#pragma once

// JSON run configuration for the command line tool. The schema is documented
// in README.md; unknown keys are rejected so a file fully determines a run.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ifsthermo/ifs.hpp"
#include "ifsthermo/potential.hpp"
#include "ifsthermo/thermo.hpp"

namespace ifsthermo::cli {

inline constexpr const char* kBudgetEnv = "IFSTHERMO_ENUM_BUDGET";

struct PotentialConfig {
  // geometric, scaled-geometric, darst-shift, conformal, linear-combination, bernoulli
  std::string form = "conformal";
  double t = 1.0;
  double coeff_phi = 0.0;
  double coeff_base = 1.0;
  std::shared_ptr<PotentialConfig> base;
  std::vector<double> probabilities;
};

struct PressureConfig {
  double t = 1.0;
};

struct BetaCurveConfig {
  double t_min = 0.0;
  std::optional<double> t_max;  // default alpha + 0.2
  int steps = 41;
};

struct StaircaseConfig {
  int level = 8;
};

struct ScanConfig {
  Word prefix;
  Word period;
  bool construct_blocks = false;
  std::size_t min_length = 200;
  double level_step = 4.0;
  int depth = 0;  // 0: chosen from the point
  double ceiling = 2.302585092994046;  // log 10
  std::size_t min_chain = 3;
};

struct RunConfig {
  IfsSpec system;
  PotentialConfig potential;
  double alpha = 1.0;
  ThermoSettings numerics;
  int validation_grid = 1024;
  std::string format = "csv";
  std::string out_path;  // empty: standard output
  PressureConfig pressure;
  BetaCurveConfig beta_curve;
  StaircaseConfig staircase;
  ScanConfig scan;
};

// Throws InputError naming the offending field (or line and column for
// syntax errors).
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

// Applies the enumeration budget from the environment, if set.
void apply_budget_override(RunConfig& config);

PotentialSpec resolve_potential(const PotentialConfig& config, const Thermo& thermo);

// "0,1,1" -> {0, 1, 1}
Word parse_word(const std::string& text, const std::string& what);

}  // namespace ifsthermo::cli
