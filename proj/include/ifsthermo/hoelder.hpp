#pragma once

// Hausdorff dimension of the set where the distribution function of nu_psi is
// not alpha-Hoelder-differentiable in the generalized sense, together with
// finite-depth diagnostics of the i-block structure of coded points.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ifsthermo/gibbs.hpp"
#include "ifsthermo/ifs.hpp"
#include "ifsthermo/potential.hpp"
#include "ifsthermo/thermo.hpp"

namespace ifsthermo {

// Potentials evaluated at the fixed point of an extreme map (the constant
// word i i i ...).
struct FixedPointData {
  Symbol symbol = 0;
  double fp = 0.0;
  double phi_val = 0.0;
  double psi_val = 0.0;
  double ratio = 0.0;  // phi_val / psi_val
  double chi_val = 0.0;
};

FixedPointData fixed_point_data(const IfsSpec& spec, const PotentialSpec& psi, double alpha, Symbol symbol);

struct LambdaReport {
  double alpha = 0.0;
  double s = 0.0;  // root of beta_alpha(s) + s * min_ratio = 0
  double s0 = 0.0;
  double s1 = 0.0;
  double min_ratio = 0.0;
  double delta = 0.0;
  double dim_nu = 0.0;
  std::string ordering_note;  // "dim_nu > s", "dim_nu < s" or "dim_nu = s"
  FixedPointData letter0;
  FixedPointData letter1;
};

// Tolerance for the agreement of the two routes to s.
inline constexpr double kLambdaConsistency = 1e-6;

LambdaReport lambda_dimension(const Thermo& thermo, const PotentialSpec& psi, double alpha);
LambdaReport lambda_dimension(const IfsSpec& spec, const PotentialSpec& psi, double alpha, int depth);

// Max deviation of beta_1(s) from P(s phi) / P(phi) over 20 points of [0, delta]
// for an affine system with psi = phi - P(phi).
double darst_consistency(const Thermo& thermo);
double darst_consistency(const IfsSpec& spec, int depth);

struct BlockEvent {
  Symbol symbol = 0;
  int level = 0;   // n: position of the left flank, 1-based
  int length = 0;  // k
  double birkhoff_chi = 0.0;  // S_n chi_alpha at the coded point
  double score = 0.0;         // S_n chi_alpha + k * psi(i i i ...)
};

// A run touching either end of the scanned word, hence without both flanks.
struct OpenRun {
  Symbol symbol = 0;
  int start = 0;  // 1-based
  int length = 0;
  bool leading = true;
};

struct BlockScan {
  std::vector<BlockEvent> blocks;
  std::vector<OpenRun> open_runs;
};

// Scans the word for i-blocks, i in {0, 1}. Birkhoff sums are taken at the
// point coded by the periodic repetition of the word.
BlockScan detect_blocks(const Word& word, const IfsSpec& spec, const PotentialSpec& psi, double alpha);

struct OscillationOptions {
  double ceiling = std::log(10.0);
  std::size_t min_chain = 3;
};

struct OscillationSeries {
  std::vector<BlockEvent> events;
  // Indices into events: the longest run of same-symbol blocks with strictly
  // increasing level and length whose scores stay at or below the ceiling.
  std::vector<std::size_t> chain;
  // Finite-depth heuristic only; membership is an asymptotic property.
  bool oscillation_candidate = false;
  double ceiling = 0.0;
};

OscillationSeries oscillation_score_series(const IfsSpec& spec, const PotentialSpec& psi, double alpha,
                                           const CodedPoint& point, int depth, const OscillationOptions& options = {});

// A point whose code alternates filler words of controlled chi-sum with
// 0-blocks of length floor(-N_k / psi(000...)), N_k = floor(sum n_j + chi(000...)
// sum m_j), so that the block scores stay bounded. Symbols are generated until
// the prefix has at least min_length symbols; the tail repeats (1, 0).
CodedPoint block_construction_point(const IfsSpec& spec, const PotentialSpec& psi, double alpha,
                                    std::size_t min_length, double level_step = 4.0);

struct QuotientEstimate {
  double lower = 0.0;
  double upper = 0.0;

  double midpoint() const { return 0.5 * (lower + upper); }
  double half_width() const { return 0.5 * (upper - lower); }
};

// |F(x) - F(eta)| / |x - eta|^alpha as an interval from the level-n bounds on F.
QuotientEstimate empirical_quotient(const IfsSpec& spec, const PotentialSpec& psi, double alpha, double x, double eta,
                                    int level, const ThermoSettings& settings = {});

}  // namespace ifsthermo
