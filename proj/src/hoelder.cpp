#include "ifsthermo/hoelder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ifsthermo/errors.hpp"
#include "ifsthermo/format.hpp"
#include "ifsthermo/roots.hpp"

namespace ifsthermo {

FixedPointData fixed_point_data(const IfsSpec& spec, const PotentialSpec& psi, double alpha, Symbol symbol) {
  if (symbol != 0 && symbol != 1) {
    throw InputError("fixed_point_data: symbol " + std::to_string(symbol) + " is not an extreme letter (0 or 1)");
  }
  if (static_cast<std::size_t>(symbol) >= spec.alphabet_size()) throw InputError("fixed_point_data: symbol out of range");
  FixedPointData d;
  d.symbol = symbol;
  d.fp = fixed_point(spec, symbol);
  d.phi_val = std::log(spec.maps[symbol].derivative(d.fp));
  d.psi_val = psi.evaluate(spec, symbol, d.fp);
  d.ratio = d.phi_val / d.psi_val;
  d.chi_val = d.psi_val - alpha * d.phi_val;
  return d;
}

LambdaReport lambda_dimension(const Thermo& thermo, const PotentialSpec& psi, double alpha) {
  const IfsSpec& spec = thermo.spec();
  const ThermoSettings& st = thermo.settings();
  thermo.require_admissible(psi, alpha, "lambda_dimension");

  LambdaReport r;
  r.alpha = alpha;
  r.letter0 = fixed_point_data(spec, psi, alpha, 0);
  r.letter1 = fixed_point_data(spec, psi, alpha, 1);
  r.min_ratio = std::min(r.letter0.ratio, r.letter1.ratio);
  r.delta = thermo.delta();

  // g(s) = beta(s) + s * ratio is increasing with g(0) = beta(0) < 0 and
  // g(delta) = delta * ratio > 0.
  auto solve = [&](double ratio, const char* what) {
    auto g = [&](double s) { return thermo.beta(psi, alpha, s).beta + s * ratio; };
    const double g0 = g(0.0), g1 = g(r.delta);
    if (!(g0 < 0.0 && g1 > 0.0)) {
      throw NumericalError(std::string(what) + ": no sign change on [0, delta]: g(0) = " + format_double(g0) +
                           ", g(delta) = " + format_double(g1));
    }
    return bisect_increasing(g, 0.0, r.delta, st.root_tolerance, st.max_iterations, what);
  };
  r.s = solve(r.min_ratio, "lambda_dimension");
  r.s0 = solve(r.letter0.ratio, "lambda_dimension (letter 0)");
  r.s1 = solve(r.letter1.ratio, "lambda_dimension (letter 1)");
  const double s_max = std::max(r.s0, r.s1);
  if (!(std::abs(r.s - s_max) <= kLambdaConsistency)) {
    throw NumericalError("lambda_dimension: min-ratio root " + format_double(r.s) + " disagrees with max(s_0, s_1) = " +
                         format_double(s_max));
  }

  r.dim_nu = thermo.dim_nu_tangent(psi, alpha);
  const double gap = r.dim_nu - r.s;
  if (std::abs(gap) <= kLambdaConsistency) {
    r.ordering_note = "dim_nu = s";
  } else {
    r.ordering_note = gap > 0.0 ? "dim_nu > s" : "dim_nu < s";
  }
  return r;
}

LambdaReport lambda_dimension(const IfsSpec& spec, const PotentialSpec& psi, double alpha, int depth) {
  ThermoSettings settings;
  settings.depth = depth;
  const Thermo thermo(spec, settings);
  return lambda_dimension(thermo, psi, alpha);
}

double darst_consistency(const Thermo& thermo) {
  const IfsSpec& spec = thermo.spec();
  if (!spec.is_affine()) throw InputError("darst_consistency: the system must be affine");
  const double p_phi = thermo.pressure(geometric_potential());
  if (!(std::abs(p_phi) > thermo.settings().pressure_tolerance)) {
    throw InputError("darst_consistency: P(phi) = " + format_double(p_phi) + " vanishes, the normalization degenerates");
  }
  const PotentialSpec psi = darst_shift_with(p_phi);
  thermo.require_admissible(psi, 1.0, "darst_consistency");
  const double delta = thermo.delta();
  constexpr int points = 20;
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    const double s = delta * k / (points - 1);
    const double implicit = thermo.beta(psi, 1.0, s).beta;
    const double closed = thermo.pressure(scaled_geometric(s)) / p_phi;
    worst = std::max(worst, std::abs(implicit - closed));
  }
  return worst;
}

double darst_consistency(const IfsSpec& spec, int depth) {
  ThermoSettings settings;
  settings.depth = depth;
  const Thermo thermo(spec, settings);
  return darst_consistency(thermo);
}

namespace {

// Coordinates y[k] of sigma^k(xi) for k = 0..n, where xi is coded by word
// followed by a point with coordinate tail.
std::vector<double> orbit_coordinates(const IfsSpec& spec, const Word& word, double tail) {
  std::vector<double> y(word.size() + 1);
  y[word.size()] = tail;
  for (std::size_t k = word.size(); k-- > 0;) y[k] = spec.maps[word[k]](y[k + 1]);
  return y;
}

// Coordinate of the point coded by word repeated forever: the fixed point of f_word.
double periodic_coordinate(const IfsSpec& spec, const Word& word) {
  double x = spec.domain.midpoint();
  for (int it = 0; it < 10000; ++it) {
    const double next = apply_word(spec, word, x);
    if (std::abs(next - x) <= 1e-15) return next;
    x = next;
  }
  return x;
}

BlockScan scan_blocks(const Word& word, const IfsSpec& spec, const PotentialSpec& psi, double alpha, double tail) {
  check_word(spec, word);
  BlockScan scan;
  if (word.empty()) return scan;
  const PotentialSpec chi = chi_potential(psi, alpha);
  const std::vector<double> y = orbit_coordinates(spec, word, tail);
  // prefix_chi[n] = S_n chi_alpha(xi)
  std::vector<double> prefix_chi(word.size() + 1, 0.0);
  for (std::size_t k = 0; k < word.size(); ++k) prefix_chi[k + 1] = prefix_chi[k] + chi.evaluate(spec, word[k], y[k + 1]);

  double psi_fixed[2] = {0.0, 0.0};
  const std::size_t extremes = std::min<std::size_t>(2, spec.alphabet_size());
  for (std::size_t i = 0; i < extremes; ++i) {
    const Symbol s = static_cast<Symbol>(i);
    psi_fixed[i] = psi.evaluate(spec, s, fixed_point(spec, s));
  }

  std::size_t start = 0;
  while (start < word.size()) {
    std::size_t end = start;
    while (end < word.size() && word[end] == word[start]) ++end;
    const Symbol sym = word[start];
    if (sym == 0 || sym == 1) {
      const int length = static_cast<int>(end - start);
      if (start == 0 || end == word.size()) {
        scan.open_runs.push_back({sym, static_cast<int>(start) + 1, length, start == 0});
      } else {
        BlockEvent e;
        e.symbol = sym;
        e.level = static_cast<int>(start);  // the 1-based position of the left flank
        e.length = length;
        e.birkhoff_chi = prefix_chi[start];
        e.score = e.birkhoff_chi + length * psi_fixed[sym];
        scan.blocks.push_back(e);
      }
    }
    start = end;
  }
  return scan;
}

}  // namespace

BlockScan detect_blocks(const Word& word, const IfsSpec& spec, const PotentialSpec& psi, double alpha) {
  check_word(spec, word);
  return scan_blocks(word, spec, psi, alpha, word.empty() ? 0.0 : periodic_coordinate(spec, word));
}

OscillationSeries oscillation_score_series(const IfsSpec& spec, const PotentialSpec& psi, double alpha,
                                           const CodedPoint& point, int depth, const OscillationOptions& options) {
  if (point.eventually_constant()) {
    throw InputError("oscillation_score_series: the point is eventually constant 0 or 1 (an endpoint)");
  }
  if (depth < 3) throw InputError("oscillation_score_series: depth must be at least 3");
  const Word word = point.expand(static_cast<std::size_t>(depth));
  const double tail = decode(spec, point.shifted(static_cast<std::size_t>(depth)), 1e-15);
  OscillationSeries out;
  out.ceiling = options.ceiling;
  out.events = scan_blocks(word, spec, psi, alpha, tail).blocks;

  // Longest chain per symbol with strictly increasing level and length among
  // events under the ceiling (events are already sorted by level).
  const std::size_t n = out.events.size();
  std::vector<std::size_t> best(n, 0), prev(n, n);
  std::size_t best_end = n;
  for (std::size_t j = 0; j < n; ++j) {
    const BlockEvent& e = out.events[j];
    if (e.score > options.ceiling) continue;
    best[j] = 1;
    for (std::size_t i = 0; i < j; ++i) {
      const BlockEvent& f = out.events[i];
      if (best[i] == 0 || f.symbol != e.symbol || !(f.level < e.level) || !(f.length < e.length)) continue;
      if (best[i] + 1 > best[j]) {
        best[j] = best[i] + 1;
        prev[j] = i;
      }
    }
    if (best_end == n || best[j] > best[best_end]) best_end = j;
  }
  for (std::size_t j = best_end; j < n; j = prev[j]) out.chain.push_back(j);
  std::reverse(out.chain.begin(), out.chain.end());
  out.oscillation_candidate = out.chain.size() >= options.min_chain;
  return out;
}

CodedPoint block_construction_point(const IfsSpec& spec, const PotentialSpec& psi, double alpha, std::size_t min_length,
                                    double level_step) {
  if (!(level_step > 0.0)) throw InputError("block_construction_point: level step must be positive");
  const FixedPointData zero = fixed_point_data(spec, psi, alpha, 0);
  const FixedPointData one = fixed_point_data(spec, psi, alpha, 1);
  if (!(zero.psi_val < 0.0) || !(zero.chi_val > 0.0) || !(one.chi_val > 0.0)) {
    throw InputError("block_construction_point: needs psi < 0 and chi_alpha > 0 at the fixed points");
  }

  Word prefix;
  double sum_n = 0.0, sum_m = 0.0, chi_sum = 0.0;
  for (int j = 1; prefix.size() < min_length; ++j) {
    sum_n += level_step * j;
    // Filler of 1s bringing S chi_alpha up to the target sum n_j + chi(0) sum m_j.
    const double target = sum_n + zero.chi_val * sum_m;
    const long filler = std::max(1L, std::lround((target - chi_sum) / one.chi_val));
    prefix.insert(prefix.end(), static_cast<std::size_t>(filler), 1);
    chi_sum += filler * one.chi_val;

    const double N = std::floor(target);
    const long m = static_cast<long>(std::floor(-N / zero.psi_val));
    if (m < 1) throw NumericalError("block_construction_point: empty 0-block");
    prefix.insert(prefix.end(), static_cast<std::size_t>(m), 0);
    chi_sum += m * zero.chi_val;
    sum_m += static_cast<double>(m);
  }
  return CodedPoint::periodic(std::move(prefix), {1, 0});
}

QuotientEstimate empirical_quotient(const IfsSpec& spec, const PotentialSpec& psi, double alpha, double x, double eta,
                                    int level, const ThermoSettings& settings) {
  if (x == eta) throw InputError("empirical_quotient: x and eta coincide");
  const Interval& X = spec.domain;
  if (!X.contains(x) || !X.contains(eta)) throw InputError("empirical_quotient: points must lie in the domain");
  const auto measure = gibbs_measure(spec, psi, std::max(level, settings.depth), settings);
  const Bounds fx = measure->distribution(x, level);
  const Bounds fe = measure->distribution(eta, level);
  const double scale = std::pow(std::abs(x - eta), alpha);
  QuotientEstimate q;
  q.lower = std::max({0.0, fx.lower - fe.upper, fe.lower - fx.upper}) / scale;
  q.upper = std::max(fx.upper - fe.lower, fe.upper - fx.lower) / scale;
  return q;
}

}  // namespace ifsthermo
