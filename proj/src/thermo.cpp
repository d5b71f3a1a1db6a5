#include "ifsthermo/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ifsthermo/errors.hpp"
#include "ifsthermo/roots.hpp"
#include "suffix_walk.hpp"

namespace ifsthermo {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

// Enumerates all count vectors (c_0, ..., c_{A-1}) summing to n.
template <class Visit>
void for_each_composition(std::size_t parts, int n, Visit&& visit) {
  std::vector<std::uint16_t> c(parts, 0);
  auto recurse = [&](auto&& self, std::size_t i, int remaining) -> void {
    if (i + 1 == parts) {
      c[i] = static_cast<std::uint16_t>(remaining);
      visit(c);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      c[i] = static_cast<std::uint16_t>(k);
      self(self, i + 1, remaining - k);
    }
  };
  recurse(recurse, 0, n);
}

}  // namespace

int default_depth(std::size_t alphabet_size) {
  if (alphabet_size <= 2) return 16;
  return std::max(1, static_cast<int>(std::floor(16.0 * std::log(2.0) / std::log(static_cast<double>(alphabet_size)))));
}

void LogSumExp::add(double v) {
  if (v > max) {
    scaled = scaled * std::exp(max - v) + 1.0;
    max = v;
  } else {
    scaled += std::exp(v - max);
  }
}

void LogSumExp::merge(const LogSumExp& other) {
  if (other.scaled == 0.0) return;
  if (other.max > max) {
    scaled = scaled * std::exp(max - other.max) + other.scaled;
    max = other.max;
  } else {
    scaled += other.scaled * std::exp(other.max - max);
  }
}

double LogSumExp::value() const {
  if (scaled == 0.0) return -std::numeric_limits<double>::infinity();
  return max + std::log(scaled);
}

void check_budget(std::size_t alphabet_size, int depth, std::uint64_t budget) {
  double count = std::pow(static_cast<double>(alphabet_size), depth);
  if (count > static_cast<double>(budget)) {
    throw ResourceError("depth " + std::to_string(depth) + " needs " + fmt(count) +
                        " cylinders, above the enumeration budget of " + std::to_string(budget));
  }
}

CylinderSums::CylinderSums(const IfsSpec& spec, int depth, std::uint64_t budget, SumStrategy strategy)
    : alphabet_(spec.alphabet_size()) {
  if (depth < 1) throw InputError("pressure depth must be at least 1");
  if (alphabet_ < 1) throw InputError("empty alphabet");
  check_budget(alphabet_, depth, budget);
  levels_.resize(depth);

  if (strategy == SumStrategy::automatic && spec.is_affine()) {
    // S_n phi only depends on how often each symbol occurs.
    compressed_ = true;
    std::vector<double> log_ratio(alphabet_);
    for (std::size_t a = 0; a < alphabet_; ++a) log_ratio[a] = std::log(spec.maps[a].derivative(0.0));
    for (int n = 1; n <= depth; ++n) {
      Level& L = levels_[n - 1];
      for_each_composition(alphabet_, n, [&](const std::vector<std::uint16_t>& c) {
        double log_mult = std::lgamma(n + 1.0);
        double phi = 0.0;
        for (std::size_t a = 0; a < alphabet_; ++a) {
          log_mult -= std::lgamma(c[a] + 1.0);
          phi += c[a] * log_ratio[a];
        }
        L.log_mult.push_back(log_mult);
        L.phi_max.push_back(phi);
        L.phi_min.push_back(phi);
        L.counts.insert(L.counts.end(), c.begin(), c.end());
      });
    }
    return;
  }

  for (int n = 1; n <= depth; ++n) {
    const std::size_t rows = static_cast<std::size_t>(std::llround(std::pow(double(alphabet_), n)));
    Level& L = levels_[n - 1];
    L.log_mult.assign(rows, 0.0);
    L.phi_max.assign(rows, 0.0);
    L.phi_min.assign(rows, 0.0);
    L.counts.assign(rows * alphabet_, 0);
  }
  auto phi = [&spec](Symbol a, double y) { return std::log(spec.maps[a].derivative(y)); };
  detail::walk_suffix_tree(spec, depth, phi,
                           [&](int level, std::uint64_t index, const detail::SuffixNode& node,
                               const std::vector<std::uint16_t>& counts) {
                             Level& L = levels_[level - 1];
                             L.phi_max[index] = *std::max_element(node.s.begin(), node.s.end());
                             L.phi_min[index] = *std::min_element(node.s.begin(), node.s.end());
                             std::copy(counts.begin(), counts.end(), L.counts.begin() + index * alphabet_);
                           });
}

double CylinderSums::pressure(const PotentialSpec& g, int level) const {
  if (level < 1 || level > depth()) {
    throw InputError("pressure level " + std::to_string(level) + " outside 1.." + std::to_string(depth()));
  }
  if (!g.symbol_terms.empty() && g.symbol_terms.size() != alphabet_) {
    throw InputError("potential has per-symbol terms for a different alphabet");
  }
  const Level& L = levels_[level - 1];
  const double c = g.phi_coeff;
  const bool has_terms = !g.symbol_terms.empty();
  LogSumExp acc;
  for (std::size_t r = 0; r < L.log_mult.size(); ++r) {
    double v = L.log_mult[r];
    if (c > 0.0) {
      v += c * L.phi_max[r];
    } else if (c < 0.0) {
      v += c * L.phi_min[r];
    }
    if (has_terms) {
      const std::uint16_t* cnt = &L.counts[r * alphabet_];
      for (std::size_t a = 0; a < alphabet_; ++a) v += cnt[a] * g.symbol_terms[a];
    }
    acc.add(v);
  }
  return acc.value() / level + g.constant;
}

PressureEstimate CylinderSums::estimate(const PotentialSpec& g) const {
  PressureEstimate out;
  out.depth = depth();
  for (int n = 1; n <= depth(); ++n) out.per_level.emplace_back(n, pressure(g, n));
  out.value = out.per_level.back().second;
  if (depth() >= 2) out.error_indicator = std::abs(out.value - out.per_level[depth() - 2].second);
  return out;
}

Thermo::Thermo(IfsSpec spec, ThermoSettings settings)
    : spec_((require_valid(spec), std::move(spec))),
      settings_(settings),
      sums_(spec_, settings_.depth, settings_.enumeration_budget) {}

double Thermo::delta() const {
  std::call_once(delta_once_, [this] {
    auto P = [this](double t) { return pressure(scaled_geometric(t)); };
    const double p0 = P(0.0);
    if (!(p0 > 0.0)) throw NumericalError("solve_delta: P(0) = " + fmt(p0) + " is not positive");
    double hi = 2.0;
    double phi = P(hi);
    while (!(phi < 0.0) && hi < 64.0) {
      hi *= 2.0;
      phi = P(hi);
    }
    if (!(phi < 0.0)) {
      throw NumericalError("solve_delta: P(t phi) does not change sign on [0, " + fmt(hi) + "]: P(0) = " + fmt(p0) +
                           ", P(" + fmt(hi) + " phi) = " + fmt(phi));
    }
    delta_ = bisect_increasing([&](double t) { return -P(t); }, 0.0, hi, settings_.root_tolerance,
                               settings_.max_iterations, "solve_delta");
  });
  return delta_;
}

PotentialSpec Thermo::darst_shift() const { return darst_shift_with(pressure(geometric_potential())); }

PotentialSpec Thermo::conformal_potential() const { return scaled_geometric(delta()); }

AdmissibilityReport Thermo::admissibility(const PotentialSpec& psi, std::optional<double> alpha) const {
  AdmissibilityReport report;
  if (!psi.symbol_terms.empty() && psi.symbol_terms.size() != spec_.alphabet_size()) {
    report.passed = false;
    report.failures.push_back("potential has " + std::to_string(psi.symbol_terms.size()) +
                              " per-symbol terms for an alphabet of size " + std::to_string(spec_.alphabet_size()));
    return report;
  }
  report.pressure = pressure(psi);
  if (!(std::abs(report.pressure) <= settings_.pressure_tolerance)) {
    report.passed = false;
    report.failures.push_back("P(psi) = " + fmt(report.pressure) + " is not within " +
                              fmt(settings_.pressure_tolerance) + " of 0");
  }

  const int grid_depth = std::max(0, std::min(settings_.admissibility_depth, settings_.depth) - 1);
  check_budget(spec_.alphabet_size(), grid_depth, settings_.enumeration_budget);
  const PotentialSpec chi = alpha ? chi_potential(psi, *alpha) : PotentialSpec{};
  std::string psi_witness, chi_witness;
  auto inspect = [&](double y) {
    for (std::size_t a = 0; a < spec_.alphabet_size(); ++a) {
      const Symbol s = static_cast<Symbol>(a);
      const double v = psi.evaluate(spec_, s, y);
      if (v > report.max_psi) {
        report.max_psi = v;
        psi_witness = "symbol " + std::to_string(a) + ", tail point " + fmt(y);
      }
      if (alpha) {
        const double w = chi.evaluate(spec_, s, y);
        if (w < report.min_chi) {
          report.min_chi = w;
          chi_witness = "symbol " + std::to_string(a) + ", tail point " + fmt(y);
        }
      }
    }
  };
  for (double y : detail::sample_points(spec_.domain)) inspect(y);
  auto zero = [](Symbol, double) { return 0.0; };
  detail::walk_suffix_tree(spec_, grid_depth, zero,
                           [&](int, std::uint64_t, const detail::SuffixNode& node, const std::vector<std::uint16_t>&) {
                             for (double y : node.y) inspect(y);
                           });

  if (!(report.max_psi < 0.0)) {
    report.passed = false;
    report.failures.push_back("psi < 0 fails: psi = " + fmt(report.max_psi) + " at " + psi_witness);
  }
  if (alpha && !(report.min_chi > settings_.positivity_margin)) {
    report.passed = false;
    report.failures.push_back("chi_alpha = psi - alpha*phi > 0 fails for alpha = " + fmt(*alpha) +
                              ": chi_alpha = " + fmt(report.min_chi) + " at " + chi_witness);
  }
  return report;
}

void Thermo::require_admissible(const PotentialSpec& psi, std::optional<double> alpha, const char* context) const {
  const AdmissibilityReport report = admissibility(psi, alpha);
  if (report.passed) return;
  std::string msg = std::string(context) + ": potential is not admissible:";
  for (const auto& f : report.failures) msg += " " + f + ";";
  throw InputError(msg);
}

BetaPoint Thermo::beta(const PotentialSpec& psi, double alpha, double t) const {
  return beta(psi, alpha, t, settings_.root_tolerance);
}

BetaPoint Thermo::beta(const PotentialSpec& psi, double alpha, double t, double tolerance) const {
  const PotentialSpec chi = chi_potential(psi, alpha);
  auto F = [&](double b) { return pressure(tilted_potential(t, b, chi)); };
  double lo = -2.0, hi = 2.0;
  double flo = F(lo), fhi = F(hi);
  while (!(flo < 0.0 && fhi > 0.0)) {
    const double width = hi - lo;
    if (width > 1048576.0) {
      throw NumericalError("beta: no sign change of P(t phi + beta chi_alpha) for t = " + fmt(t) + " on [" + fmt(lo) +
                           ", " + fmt(hi) + "]: values " + fmt(flo) + ", " + fmt(fhi));
    }
    if (!(flo < 0.0)) {
      lo -= width;
      flo = F(lo);
    }
    if (!(fhi > 0.0)) {
      hi += width;
      fhi = F(hi);
    }
  }
  BetaPoint out;
  out.t = t;
  out.alpha = alpha;
  out.beta = bisect_increasing(F, lo, hi, tolerance, settings_.max_iterations, "beta");
  out.residual = std::abs(F(out.beta));
  return out;
}

double Thermo::beta_derivative(const PotentialSpec& psi, double alpha, double t) const {
  // Solve to floating-point resolution so the difference quotient is not
  // dominated by bisection noise.
  constexpr double tight = 1e-15;
  auto central = [&](double h) {
    return (beta(psi, alpha, t + h, tight).beta - beta(psi, alpha, t - h, tight).beta) / (2.0 * h);
  };
  const double h = settings_.fd_step;
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  const double d = central(h);
  if (!settings_.richardson) return d;
  return (4.0 * central(0.5 * h) - d) / 3.0;
}

double Thermo::dim_nu_tangent(const PotentialSpec& psi, double alpha) const {
  const double slope = beta_derivative(psi, alpha, alpha);
  if (!(std::abs(slope) >= 1e-12)) {
    throw NumericalError("dim_nu_tangent: degenerate tangent, beta'(alpha) = " + fmt(slope));
  }
  return alpha - 1.0 / slope;
}

DimensionReport Thermo::dimension_report(const PotentialSpec& psi, double alpha) const {
  require_admissible(psi, alpha, "dimension_report");
  DimensionReport r;
  r.alpha = alpha;
  r.delta = delta();
  r.dim_nu = dim_nu_tangent(psi, alpha);
  r.beta_anchor_zero = beta(psi, alpha, r.delta).beta;
  r.beta_anchor_one = beta(psi, alpha, alpha).beta;
  return r;
}

namespace {

Thermo make_thermo(const IfsSpec& spec, int depth) {
  ThermoSettings settings;
  settings.depth = depth;
  return Thermo(spec, settings);
}

}  // namespace

PressureEstimate pressure(const IfsSpec& spec, const PotentialSpec& g, int depth) {
  return make_thermo(spec, depth).pressure_estimate(g);
}

AdmissibilityReport admissibility_check(const IfsSpec& spec, const PotentialSpec& psi, double alpha, int depth) {
  return make_thermo(spec, depth).admissibility(psi, alpha);
}

double solve_delta(const IfsSpec& spec, int depth) { return make_thermo(spec, depth).delta(); }

BetaPoint beta(const IfsSpec& spec, const PotentialSpec& psi, double alpha, double t, int depth) {
  Thermo thermo = make_thermo(spec, depth);
  thermo.require_admissible(psi, alpha, "beta");
  return thermo.beta(psi, alpha, t);
}

double dim_nu_tangent(const IfsSpec& spec, const PotentialSpec& psi, double alpha, int depth) {
  Thermo thermo = make_thermo(spec, depth);
  thermo.require_admissible(psi, alpha, "dim_nu_tangent");
  return thermo.dim_nu_tangent(psi, alpha);
}

}  // namespace ifsthermo
