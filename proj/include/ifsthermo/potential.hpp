#pragma once

#include <string>
#include <vector>

#include "ifsthermo/ifs.hpp"

namespace ifsthermo {

enum class PotentialForm {
  geometric,           // phi
  scaled_geometric,    // t * phi
  darst_shift,         // phi - P(phi)
  linear_combination,  // a * phi + b * base
  bernoulli,           // log p_{x_1}
  derived,             // internal combinations such as chi_alpha or t*phi + beta*chi_alpha
};

const char* to_string(PotentialForm form);

// Potentials of the form
//
//   g(xi) = phi_coeff * phi(xi) + constant + symbol_terms[x_1],
//
// where phi(xi) = log f_{x_1}'(y) and y is the point coded by the shifted
// word sigma(xi). The family is closed under linear combination, which is all
// the pressure equations below require.
struct PotentialSpec {
  PotentialForm form = PotentialForm::geometric;
  double phi_coeff = 1.0;
  double constant = 0.0;
  std::vector<double> symbol_terms;  // empty means all zero
  double parameter = 0.0;            // t for scaled_geometric, informational otherwise

  // first: the first symbol of the coded point; tail_x: coordinate of the
  // shifted point.
  double evaluate(const IfsSpec& spec, Symbol first, double tail_x) const;
  double symbol_term(Symbol a) const {
    return symbol_terms.empty() ? 0.0 : symbol_terms[static_cast<std::size_t>(a)];
  }
  // True when g only depends on the first symbol (affine system or no phi part).
  bool constant_on_first_cylinders(const IfsSpec& spec) const;
  std::string describe() const;
};

PotentialSpec geometric_potential();
PotentialSpec scaled_geometric(double t);
PotentialSpec linear_combination(double coeff_phi, double coeff_base, const PotentialSpec& base);
// psi(xi) = log p_{x_1}; probabilities need not be normalized here.
PotentialSpec bernoulli_potential(const std::vector<double>& probabilities);
// phi - shift, labelled as the Darst normalization (shift is P(phi)).
PotentialSpec darst_shift_with(double pressure_of_phi);

// chi_alpha = psi - alpha * phi
PotentialSpec chi_potential(const PotentialSpec& psi, double alpha);
// t * phi + beta * chi
PotentialSpec tilted_potential(double t, double beta, const PotentialSpec& chi);

// Sum_{k=0}^{n-1} g(sigma^k xi) for xi coded by word followed by the code of x.
double birkhoff_sum(const IfsSpec& spec, const PotentialSpec& g, const Word& word, double x);

}  // namespace ifsthermo
