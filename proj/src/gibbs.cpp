#include "ifsthermo/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>

#include "ifsthermo/errors.hpp"
#include "ifsthermo/format.hpp"
#include "suffix_walk.hpp"

namespace ifsthermo {

const char* to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::exact_bernoulli: return "exact-bernoulli";
    case WeightMode::level_normalized: return "level-normalized";
  }
  return "unknown";
}

GibbsMeasure::GibbsMeasure(const IfsSpec& spec, const PotentialSpec& psi, int table_level,
                           const ThermoSettings& settings)
    : spec_(spec), table_level_(table_level), order_(spatial_order(spec)) {
  Thermo thermo(spec, settings);
  thermo.require_admissible(psi, std::nullopt, "gibbs measure");

  if (psi.constant_on_first_cylinders(spec)) {
    mode_ = WeightMode::exact_bernoulli;
    // P(psi) = 0 means the p_a sum to one; renormalizing removes the residual
    // of the root solve that produced psi.
    double total = 0.0;
    for (std::size_t a = 0; a < spec.alphabet_size(); ++a) {
      probabilities_.push_back(std::exp(psi.evaluate(spec, static_cast<Symbol>(a), spec.domain.lo)));
      total += probabilities_.back();
    }
    for (double& p : probabilities_) p /= total;
    return;
  }
  mode_ = WeightMode::level_normalized;
  if (table_level < 1) throw InputError("gibbs measure: table level must be at least 1");
  build_table(psi, settings.enumeration_budget);
}

void GibbsMeasure::build_table(const PotentialSpec& psi, std::uint64_t budget) {
  const std::size_t A = spec_.alphabet_size();
  const int L = table_level_;
  check_budget(A, L, budget);

  std::vector<std::vector<double>> anchor_sum(L), spread(L);
  for (int n = 1; n <= L; ++n) {
    const auto rows = static_cast<std::size_t>(std::llround(std::pow(double(A), n)));
    anchor_sum[n - 1].assign(rows, 0.0);
    spread[n - 1].assign(rows, 0.0);
  }
  auto g = [&](Symbol a, double y) { return psi.evaluate(spec_, a, y); };
  detail::walk_suffix_tree(spec_, L, g,
                           [&](int level, std::uint64_t index, const detail::SuffixNode& node,
                               const std::vector<std::uint16_t>&) {
                             anchor_sum[level - 1][index] = node.s[0];
                             auto [lo, hi] = std::minmax_element(node.s.begin(), node.s.end());
                             spread[level - 1][index] = *hi - *lo;
                           });

  weights_.assign(L, {});
  LogSumExp z;
  for (double v : anchor_sum[L - 1]) z.add(v);
  const double log_z = z.value();
  weights_[L - 1].resize(anchor_sum[L - 1].size());
  for (std::size_t i = 0; i < weights_[L - 1].size(); ++i) weights_[L - 1][i] = std::exp(anchor_sum[L - 1][i] - log_z);
  for (int n = L - 1; n >= 1; --n) {
    auto& coarse = weights_[n - 1];
    const auto& fine = weights_[n];
    coarse.assign(anchor_sum[n - 1].size(), 0.0);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      for (std::size_t a = 0; a < A; ++a) coarse[i] += fine[i * A + a];
    }
  }

  comparability_.assign(L, 1.0);
  for (int n = 1; n <= L; ++n) {
    double worst = 0.0, widest = 0.0;
    for (std::size_t i = 0; i < weights_[n - 1].size(); ++i) {
      worst = std::max(worst, std::abs(std::log(weights_[n - 1][i]) - anchor_sum[n - 1][i]));
      widest = std::max(widest, spread[n - 1][i]);
    }
    comparability_[n - 1] = std::exp(worst + widest);
  }

  // cumulative_[r] is the mass of the first r finest cylinders in spatial
  // order; level n reads it at stride A^(L-n), so all levels share one sum.
  const std::size_t rows = weights_[L - 1].size();
  cumulative_.assign(rows + 1, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    // Base-A digits of r are positions in the spatial order.
    std::uint64_t index = 0;
    for (std::uint64_t scale = rows / A, rest = r; scale > 0; scale /= A) {
      index = index * A + order_[rest / scale];
      rest %= scale;
    }
    cumulative_[r + 1] = cumulative_[r] + weights_[L - 1][index];
  }
}

double GibbsMeasure::weight(const Word& word) const {
  check_word(spec_, word);
  if (mode_ == WeightMode::exact_bernoulli) {
    double w = 1.0;
    for (Symbol a : word) w *= probabilities_[a];
    return w;
  }
  if (word.empty()) return 1.0;
  if (static_cast<int>(word.size()) > table_level_) {
    throw InputError("gibbs measure: word length " + std::to_string(word.size()) + " exceeds table level " +
                     std::to_string(table_level_));
  }
  std::uint64_t index = 0;
  for (Symbol a : word) index = index * spec_.alphabet_size() + a;
  return weights_[word.size() - 1][index];
}

double GibbsMeasure::comparability(int level) const {
  if (mode_ == WeightMode::exact_bernoulli) return 1.0;
  if (level < 1 || level > table_level_) throw InputError("gibbs measure: level outside the table");
  return comparability_[level - 1];
}

double GibbsMeasure::mass_before(const std::vector<std::size_t>& positions) const {
  const std::size_t A = spec_.alphabet_size();
  if (mode_ == WeightMode::level_normalized) {
    std::uint64_t rank = 0;
    for (std::size_t pos : positions) rank = rank * A + pos;
    for (std::size_t k = positions.size(); k < static_cast<std::size_t>(table_level_); ++k) rank *= A;
    return cumulative_[rank];
  }
  double lower = 0.0, current = 1.0;
  for (std::size_t pos : positions) {
    for (std::size_t j = 0; j < pos; ++j) lower += current * probabilities_[order_[j]];
    current *= probabilities_[order_[pos]];
  }
  return lower;
}

namespace {

// Next word of the same length in base-A order; false past the last one.
bool advance(std::vector<std::size_t>& positions, std::size_t A) {
  for (std::size_t k = positions.size(); k-- > 0;) {
    if (++positions[k] < A) return true;
    positions[k] = 0;
  }
  return false;
}

}  // namespace

Bounds GibbsMeasure::distribution(double x, int level) const {
  if (level < 1) throw InputError("distribution_value: level must be at least 1");
  if (mode_ == WeightMode::level_normalized && level > table_level_) {
    throw InputError("distribution_value: level " + std::to_string(level) + " exceeds table level " +
                     std::to_string(table_level_));
  }
  const Interval& X = spec_.domain;
  if (x < X.lo) return {0.0, 0.0};
  if (x >= X.hi) return {1.0, 1.0};

  // Both bounds are masses left of a level-n cylinder, read from one function
  // of its spatial rank, so neighbouring queries and levels agree bit for bit.
  const std::size_t A = spec_.alphabet_size();
  auto clamp = [](double v) { return std::clamp(v, 0.0, 1.0); };
  auto mass = [&](std::vector<std::size_t> positions, bool next) {
    if (next && !advance(positions, A)) return 1.0;
    return clamp(mass_before(positions));
  };
  std::vector<std::size_t> positions;
  positions.reserve(level);
  Word word;
  for (int k = 1; k <= level; ++k) {
    std::size_t pos = 0;
    bool inside = false;
    word.push_back(0);
    for (; pos < A; ++pos) {
      word.back() = order_[pos];
      const double p = apply_word(spec_, word, X.lo);
      const double q = apply_word(spec_, word, X.hi);
      // The measure has no atoms, so F at a cylinder endpoint is the mass on
      // its left exactly.
      if (x <= std::min(p, q)) break;
      if (x < std::max(p, q)) {
        inside = true;
        break;
      }
    }
    if (!inside) {
      // x sits in the gap before child pos (or after the last child).
      const bool past_last = pos == A;
      positions.push_back(past_last ? A - 1 : pos);
      positions.resize(level, 0);
      if (past_last) {
        for (int j = k; j < level; ++j) positions[j] = A - 1;
      }
      const double v = mass(positions, past_last);
      return {v, v};
    }
    positions.push_back(pos);
  }
  return {mass(positions, false), mass(positions, true)};
}

StaircaseSample GibbsMeasure::staircase(int level, std::uint64_t budget) const {
  if (level < 1) throw InputError("staircase: level must be at least 1");
  if (mode_ == WeightMode::level_normalized && level > table_level_) {
    throw InputError("staircase: level " + std::to_string(level) + " exceeds table level " +
                     std::to_string(table_level_));
  }
  const std::size_t A = spec_.alphabet_size();
  check_budget(A, level, budget);
  StaircaseSample out;
  out.level = level;
  out.points.reserve(2 * static_cast<std::size_t>(std::llround(std::pow(double(A), level))));
  auto clamp = [](double v) { return std::clamp(v, 0.0, 1.0); };
  // Left endpoints carry the mass strictly to the left, right endpoints the
  // mass up to and including the cylinder.
  std::vector<std::size_t> positions(level, 0);
  Word word(level);
  do {
    for (int k = 0; k < level; ++k) word[k] = order_[positions[k]];
    const double p = apply_word(spec_, word, spec_.domain.lo);
    const double q = apply_word(spec_, word, spec_.domain.hi);
    const double left = clamp(mass_before(positions));
    std::vector<std::size_t> next = positions;
    const double right = advance(next, A) ? clamp(mass_before(next)) : 1.0;
    out.points.push_back({std::min(p, q), left, left});
    out.points.push_back({std::max(p, q), right, right});
  } while (advance(positions, A));
  return out;
}

namespace {

std::string fingerprint(const IfsSpec& spec, const PotentialSpec& psi, int level, const ThermoSettings& s) {
  std::ostringstream key;
  key << format_double(spec.domain.lo) << ':' << format_double(spec.domain.hi);
  for (const auto& m : spec.maps) {
    if (const auto* a = std::get_if<AffineMap>(&m.kind())) {
      key << "|A" << format_double(a->ratio) << ',' << format_double(a->offset);
    } else if (const auto* q = std::get_if<QuadraticMap>(&m.kind())) {
      key << "|Q" << format_double(q->c) << ',' << format_double(q->d) << ',' << format_double(q->e);
    }
  }
  key << "#" << format_double(psi.phi_coeff) << ',' << format_double(psi.constant);
  for (double v : psi.symbol_terms) key << ',' << format_double(v);
  key << "#" << level << ',' << s.depth << ',' << s.enumeration_budget << ',' << format_double(s.pressure_tolerance)
      << ',' << s.admissibility_depth;
  return key.str();
}

}  // namespace

std::shared_ptr<const GibbsMeasure> gibbs_measure(const IfsSpec& spec, const PotentialSpec& psi, int table_level,
                                                  const ThermoSettings& settings) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const GibbsMeasure>> cache;
  const int key_level = psi.constant_on_first_cylinders(spec) ? 0 : table_level;
  const std::string key = fingerprint(spec, psi, key_level, settings);
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto measure = std::make_shared<const GibbsMeasure>(spec, psi, table_level, settings);
  cache.emplace(key, measure);
  return measure;
}

namespace {

// One table per (system, potential, settings): levels up to the pressure depth
// are marginals of the same finest level, so results agree across levels.
int shared_table_level(int level, const ThermoSettings& settings) { return std::max(level, settings.depth); }

}  // namespace

CylinderWeight cylinder_weight(const IfsSpec& spec, const PotentialSpec& psi, const Word& word,
                               const ThermoSettings& settings) {
  const int level = std::max<int>(1, static_cast<int>(word.size()));
  auto measure = gibbs_measure(spec, psi, shared_table_level(level, settings), settings);
  CylinderWeight out;
  out.mode = measure->mode();
  out.value = measure->weight(word);
  out.comparability = word.empty() ? 1.0 : measure->comparability(level);
  return out;
}

Bounds distribution_value(const IfsSpec& spec, const PotentialSpec& psi, double x, int level,
                          const ThermoSettings& settings) {
  return gibbs_measure(spec, psi, shared_table_level(level, settings), settings)->distribution(x, level);
}

StaircaseSample staircase_sample(const IfsSpec& spec, const PotentialSpec& psi, int level,
                                 const ThermoSettings& settings) {
  return gibbs_measure(spec, psi, shared_table_level(level, settings), settings)
      ->staircase(level, settings.enumeration_budget);
}

void write_staircase_csv(std::ostream& out, const StaircaseSample& sample) {
  out << "x,F_lower,F_upper\n";
  for (const auto& p : sample.points) {
    out << format_double(p.x) << ',' << format_double(p.f_lower) << ',' << format_double(p.f_upper) << '\n';
  }
}

}  // namespace ifsthermo
