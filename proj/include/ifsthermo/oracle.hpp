#pragma once

// Closed forms for affine systems, kept apart from the solver code so tests
// can compare the two.

#include <vector>

namespace ifsthermo::oracle {

// log sum_a ratios_a^t
double affine_pressure(const std::vector<double>& ratios, double t);

// delta^2 / alpha; requires alpha > delta > 0.
double falconer_dimension(double delta, double alpha);

// (sum p log p) / (sum p log r), the dimension of a Bernoulli measure.
double bernoulli_dimension(const std::vector<double>& probabilities, const std::vector<double>& ratios);

// P(s phi) / P(phi) for an affine system.
double darst_beta_closed_form(const std::vector<double>& ratios, double s);

struct AffineClosedForms {
  std::vector<double> ratios;

  explicit AffineClosedForms(std::vector<double> r);

  double pressure(double t) const { return affine_pressure(ratios, t); }
  // sum ratios^delta = 1
  double delta() const;
  // p_a = a / sum a
  std::vector<double> darst_probabilities() const;
  double darst_dimension_nu() const;
  // Root of s P(phi) = P(s phi) (P(phi) / min_i log a_i - 1) on [0, delta].
  double darst_lambda_dimension() const;
};

}  // namespace ifsthermo::oracle
