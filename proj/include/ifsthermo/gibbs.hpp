#pragma once

// Gibbs cylinder weights and the distribution function F_psi (a devil's
// staircase) of the Gibbs measure nu_psi.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "ifsthermo/ifs.hpp"
#include "ifsthermo/potential.hpp"
#include "ifsthermo/thermo.hpp"

namespace ifsthermo {

enum class WeightMode {
  // Affine system with psi constant on first-level cylinders: nu_psi is the
  // Bernoulli measure with p_a = exp(psi on [a]), and weights are products.
  exact_bernoulli,
  // General case: weights proportional to exp(S_n psi(anchor)) at the table
  // level, coarser levels obtained by summing children.
  level_normalized,
};

const char* to_string(WeightMode mode);

struct CylinderWeight {
  double value = 0.0;
  // K with value / exp(S_n psi(xi)) in [1/K, K] for all xi in the cylinder.
  double comparability = 1.0;
  WeightMode mode = WeightMode::exact_bernoulli;
};

// Enclosure of F(x) = nu((-inf, x]).
struct Bounds {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool exact() const { return lower == upper; }
};

struct StaircasePoint {
  double x;
  double f_lower;
  double f_upper;
};

struct StaircaseSample {
  std::vector<StaircasePoint> points;  // sorted by x
  int level = 0;
};

class GibbsMeasure {
 public:
  // table_level bounds the depth of weight lookups in level-normalized mode;
  // it is ignored in exact-bernoulli mode. Throws InputError when psi is not
  // normalized (psi < 0 and P(psi) = 0).
  GibbsMeasure(const IfsSpec& spec, const PotentialSpec& psi, int table_level, const ThermoSettings& settings = {});

  WeightMode mode() const { return mode_; }
  int table_level() const { return table_level_; }
  const IfsSpec& spec() const { return spec_; }
  // Normalized per-symbol probabilities (exact-bernoulli mode only).
  const std::vector<double>& probabilities() const { return probabilities_; }

  double weight(const Word& word) const;
  double comparability(int level) const;
  Bounds distribution(double x, int level) const;
  StaircaseSample staircase(int level, std::uint64_t budget = std::uint64_t{1} << 24) const;

 private:
  // Mass of the cylinders left of the one given by spatial positions.
  double mass_before(const std::vector<std::size_t>& positions) const;
  void build_table(const PotentialSpec& psi, std::uint64_t budget);

  IfsSpec spec_;
  WeightMode mode_;
  int table_level_;
  std::vector<Symbol> order_;
  std::vector<double> probabilities_;
  std::vector<std::vector<double>> weights_;  // level-normalized: weights_[n-1][word index]
  std::vector<double> comparability_;
  std::vector<double> cumulative_;  // level-normalized: finest-level partial sums in spatial order
};

// Shared immutable measures keyed by (system, potential, level, settings).
// Building happens under a lock; published measures are read concurrently.
std::shared_ptr<const GibbsMeasure> gibbs_measure(const IfsSpec& spec, const PotentialSpec& psi, int table_level,
                                                  const ThermoSettings& settings = {});

CylinderWeight cylinder_weight(const IfsSpec& spec, const PotentialSpec& psi, const Word& word,
                               const ThermoSettings& settings = {});
Bounds distribution_value(const IfsSpec& spec, const PotentialSpec& psi, double x, int level,
                          const ThermoSettings& settings = {});
StaircaseSample staircase_sample(const IfsSpec& spec, const PotentialSpec& psi, int level,
                                 const ThermoSettings& settings = {});

// Header x,F_lower,F_upper then one row per point.
void write_staircase_csv(std::ostream& out, const StaircaseSample& sample);

}  // namespace ifsthermo
