#pragma once

// Pressure, the dimension of the limit set, the implicit function beta_alpha
// and the dimension of the Gibbs measure nu_psi.

#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ifsthermo/ifs.hpp"
#include "ifsthermo/potential.hpp"

namespace ifsthermo {

struct ThermoSettings {
  int depth = 16;
  std::uint64_t enumeration_budget = std::uint64_t{1} << 24;
  double root_tolerance = 1e-10;
  int max_iterations = 200;
  double fd_step = 1e-4;
  bool richardson = false;
  // |P(psi)| allowed by the admissibility check.
  double pressure_tolerance = 1e-8;
  // Depth of the cylinder grid used for sign checks.
  int admissibility_depth = 10;
  // chi_alpha must exceed this on the grid.
  double positivity_margin = 0.0;
};

// Depth giving roughly 2^16 cylinders for the alphabet, the default for a
// two-letter alphabet.
int default_depth(std::size_t alphabet_size);

// Running (max, scaled sum) pair; merging two accumulators is associative, so
// partial sums over disjoint word prefixes can be combined in any order.
struct LogSumExp {
  double max = -std::numeric_limits<double>::infinity();
  double scaled = 0.0;

  void add(double v);
  void merge(const LogSumExp& other);
  double value() const;
};

struct PressureEstimate {
  double value = 0.0;
  std::vector<std::pair<int, double>> per_level;
  double error_indicator = 0.0;
  int depth = 0;
};

enum class SumStrategy {
  automatic,  // count classes for affine systems, full enumeration otherwise
  enumerate,  // always visit all |A|^n words
};

// Birkhoff sums of phi for every cylinder of length 1..depth, sampled at three
// points of each cylinder (tail coordinates lo, midpoint, hi of X). Pressure
// of any PotentialSpec is then a log-sum-exp over these rows.
class CylinderSums {
 public:
  CylinderSums(const IfsSpec& spec, int depth, std::uint64_t budget, SumStrategy strategy = SumStrategy::automatic);

  int depth() const { return static_cast<int>(levels_.size()); }
  std::size_t rows(int level) const { return levels_.at(level - 1).log_mult.size(); }
  bool compressed() const { return compressed_; }

  // P_n(g) = (1/n) log sum_w exp(max over sample points of S_n g).
  double pressure(const PotentialSpec& g, int level) const;
  PressureEstimate estimate(const PotentialSpec& g) const;

 private:
  struct Level {
    std::vector<double> log_mult;
    std::vector<double> phi_max;
    std::vector<double> phi_min;
    std::vector<std::uint16_t> counts;  // alphabet_ entries per row
  };
  std::size_t alphabet_;
  bool compressed_ = false;
  std::vector<Level> levels_;
};

void check_budget(std::size_t alphabet_size, int depth, std::uint64_t budget);

struct BetaPoint {
  double t = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  double residual = 0.0;
};

struct AdmissibilityReport {
  bool passed = true;
  double pressure = 0.0;
  double max_psi = -std::numeric_limits<double>::infinity();
  double min_chi = std::numeric_limits<double>::infinity();
  std::vector<std::string> failures;
};

struct DimensionReport {
  double delta = 0.0;
  double dim_nu = 0.0;
  double alpha = 0.0;
  double beta_anchor_zero = 0.0;
  double beta_anchor_one = 0.0;
};

// Solver context for one system at fixed numerical settings. Immutable after
// construction apart from the lazily computed delta, which is guarded.
class Thermo {
 public:
  explicit Thermo(IfsSpec spec, ThermoSettings settings = {});

  const IfsSpec& spec() const { return spec_; }
  const ThermoSettings& settings() const { return settings_; }
  const CylinderSums& sums() const { return sums_; }

  double pressure(const PotentialSpec& g) const { return sums_.pressure(g, settings_.depth); }
  PressureEstimate pressure_estimate(const PotentialSpec& g) const { return sums_.estimate(g); }

  // Root of t -> P(t phi).
  double delta() const;
  // phi - P(phi).
  PotentialSpec darst_shift() const;
  // delta * phi, the potential of the delta-conformal measure.
  PotentialSpec conformal_potential() const;

  // Sign conditions psi < 0 and (when alpha is given) chi_alpha > 0 on the
  // cylinder grid, plus |P(psi)| within tolerance.
  AdmissibilityReport admissibility(const PotentialSpec& psi, std::optional<double> alpha) const;
  void require_admissible(const PotentialSpec& psi, std::optional<double> alpha, const char* context) const;

  // beta with P(t phi + beta chi_alpha) = 0. Admissibility is the caller's
  // responsibility (see require_admissible).
  BetaPoint beta(const PotentialSpec& psi, double alpha, double t) const;
  BetaPoint beta(const PotentialSpec& psi, double alpha, double t, double tolerance) const;
  // Finite-difference estimate of beta_alpha'(t).
  double beta_derivative(const PotentialSpec& psi, double alpha, double t) const;
  // x-intercept of the tangent to beta_alpha at (alpha, 1).
  double dim_nu_tangent(const PotentialSpec& psi, double alpha) const;
  DimensionReport dimension_report(const PotentialSpec& psi, double alpha) const;

 private:
  IfsSpec spec_;
  ThermoSettings settings_;
  CylinderSums sums_;
  mutable std::once_flag delta_once_;
  mutable double delta_ = 0.0;
};

PressureEstimate pressure(const IfsSpec& spec, const PotentialSpec& g, int depth);
AdmissibilityReport admissibility_check(const IfsSpec& spec, const PotentialSpec& psi, double alpha, int depth);
double solve_delta(const IfsSpec& spec, int depth);
BetaPoint beta(const IfsSpec& spec, const PotentialSpec& psi, double alpha, double t, int depth);
double dim_nu_tangent(const IfsSpec& spec, const PotentialSpec& psi, double alpha, int depth);

}  // namespace ifsthermo
