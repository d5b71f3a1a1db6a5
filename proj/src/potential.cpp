#include "ifsthermo/potential.hpp"

#include <cmath>
#include <sstream>

#include "ifsthermo/errors.hpp"

namespace ifsthermo {

const char* to_string(PotentialForm form) {
  switch (form) {
    case PotentialForm::geometric: return "geometric";
    case PotentialForm::scaled_geometric: return "scaled-geometric";
    case PotentialForm::darst_shift: return "darst-shift";
    case PotentialForm::linear_combination: return "linear-combination";
    case PotentialForm::bernoulli: return "bernoulli";
    case PotentialForm::derived: return "derived";
  }
  return "unknown";
}

double PotentialSpec::evaluate(const IfsSpec& spec, Symbol first, double tail_x) const {
  double value = constant + symbol_term(first);
  if (phi_coeff != 0.0) value += phi_coeff * std::log(spec.maps[first].derivative(tail_x));
  return value;
}

bool PotentialSpec::constant_on_first_cylinders(const IfsSpec& spec) const {
  return phi_coeff == 0.0 || spec.is_affine();
}

std::string PotentialSpec::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << to_string(form) << ": " << phi_coeff << "*phi + " << constant;
  if (!symbol_terms.empty()) {
    out << " + [";
    for (std::size_t i = 0; i < symbol_terms.size(); ++i) out << (i ? ", " : "") << symbol_terms[i];
    out << "]";
  }
  return out.str();
}

PotentialSpec geometric_potential() { return {}; }

PotentialSpec scaled_geometric(double t) {
  PotentialSpec g;
  g.form = PotentialForm::scaled_geometric;
  g.phi_coeff = t;
  g.parameter = t;
  return g;
}

namespace {

std::vector<double> scaled_terms(double factor, const std::vector<double>& terms) {
  std::vector<double> out(terms);
  for (double& v : out) v *= factor;
  return out;
}

}  // namespace

PotentialSpec linear_combination(double coeff_phi, double coeff_base, const PotentialSpec& base) {
  PotentialSpec g;
  g.form = PotentialForm::linear_combination;
  g.phi_coeff = coeff_phi + coeff_base * base.phi_coeff;
  g.constant = coeff_base * base.constant;
  g.symbol_terms = scaled_terms(coeff_base, base.symbol_terms);
  return g;
}

PotentialSpec bernoulli_potential(const std::vector<double>& probabilities) {
  PotentialSpec g;
  g.form = PotentialForm::bernoulli;
  g.phi_coeff = 0.0;
  for (double p : probabilities) {
    if (!(p > 0.0)) throw InputError("bernoulli potential: probabilities must be positive");
    g.symbol_terms.push_back(std::log(p));
  }
  return g;
}

PotentialSpec darst_shift_with(double pressure_of_phi) {
  PotentialSpec g;
  g.form = PotentialForm::darst_shift;
  g.phi_coeff = 1.0;
  g.constant = -pressure_of_phi;
  g.parameter = pressure_of_phi;
  return g;
}

PotentialSpec chi_potential(const PotentialSpec& psi, double alpha) {
  PotentialSpec g = psi;
  g.form = PotentialForm::derived;
  g.phi_coeff = psi.phi_coeff - alpha;
  return g;
}

PotentialSpec tilted_potential(double t, double beta, const PotentialSpec& chi) {
  PotentialSpec g;
  g.form = PotentialForm::derived;
  g.phi_coeff = t + beta * chi.phi_coeff;
  g.constant = beta * chi.constant;
  g.symbol_terms = scaled_terms(beta, chi.symbol_terms);
  return g;
}

double birkhoff_sum(const IfsSpec& spec, const PotentialSpec& g, const Word& word, double x) {
  if (word.empty()) throw InputError("birkhoff_sum: word must be non-empty");
  if (!spec.domain.contains(x)) throw InputError("birkhoff_sum: x lies outside the domain");
  check_word(spec, word);
  if (!g.symbol_terms.empty() && g.symbol_terms.size() != spec.alphabet_size()) {
    throw InputError("birkhoff_sum: potential has per-symbol terms for a different alphabet");
  }
  // Walk from the innermost map outwards; y is always the shifted point.
  double sum = 0.0;
  double y = x;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    sum += g.evaluate(spec, *it, y);
    y = spec.maps[*it](y);
  }
  return sum;
}

}  // namespace ifsthermo
