#include "ifsthermo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ifsthermo/errors.hpp"

namespace ifsthermo::oracle {

namespace {

void check_ratios(const std::vector<double>& ratios) {
  if (ratios.empty()) throw InputError("oracle: no ratios");
  for (double r : ratios) {
    if (!(r > 0.0 && r < 1.0)) throw InputError("oracle: ratios must lie in (0, 1)");
  }
}

// Plain bisection on [lo, hi] for f with f(lo) > 0 > f(hi).
template <class F>
double bisect_decreasing(F f, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double affine_pressure(const std::vector<double>& ratios, double t) {
  check_ratios(ratios);
  double sum = 0.0;
  for (double r : ratios) sum += std::pow(r, t);
  return std::log(sum);
}

double falconer_dimension(double delta, double alpha) {
  if (!(delta > 0.0)) throw InputError("falconer_dimension: delta must be positive");
  if (!(alpha > delta)) throw InputError("falconer_dimension: alpha must exceed delta");
  return delta * delta / alpha;
}

double bernoulli_dimension(const std::vector<double>& probabilities, const std::vector<double>& ratios) {
  check_ratios(ratios);
  if (probabilities.size() != ratios.size()) throw InputError("bernoulli_dimension: size mismatch");
  double total = 0.0, entropy = 0.0, lyapunov = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double p = probabilities[i];
    if (!(p > 0.0)) throw InputError("bernoulli_dimension: probabilities must be positive");
    total += p;
    entropy += p * std::log(p);
    lyapunov += p * std::log(ratios[i]);
  }
  if (!(std::abs(total - 1.0) <= 1e-12)) throw InputError("bernoulli_dimension: probabilities must sum to 1");
  return entropy / lyapunov;
}

double darst_beta_closed_form(const std::vector<double>& ratios, double s) {
  const double p_phi = affine_pressure(ratios, 1.0);
  if (p_phi == 0.0) throw InputError("darst_beta_closed_form: P(phi) = 0");
  return affine_pressure(ratios, s) / p_phi;
}

AffineClosedForms::AffineClosedForms(std::vector<double> r) : ratios(std::move(r)) { check_ratios(ratios); }

double AffineClosedForms::delta() const {
  double hi = 1.0;
  while (pressure(hi) > 0.0) hi *= 2.0;
  return bisect_decreasing([this](double t) { return pressure(t); }, 0.0, hi);
}

std::vector<double> AffineClosedForms::darst_probabilities() const {
  const double sum = std::accumulate(ratios.begin(), ratios.end(), 0.0);
  std::vector<double> p;
  for (double r : ratios) p.push_back(r / sum);
  return p;
}

double AffineClosedForms::darst_dimension_nu() const { return bernoulli_dimension(darst_probabilities(), ratios); }

double AffineClosedForms::darst_lambda_dimension() const {
  const double p_phi = pressure(1.0);
  if (p_phi == 0.0) throw InputError("darst_lambda_dimension: P(phi) = 0");
  const double m = std::log(*std::min_element(ratios.begin(), ratios.end()));
  const double factor = p_phi / m - 1.0;
  auto h = [&](double s) { return s * p_phi - pressure(s) * factor; };
  return bisect_decreasing(h, 0.0, delta());
}

}  // namespace ifsthermo::oracle
