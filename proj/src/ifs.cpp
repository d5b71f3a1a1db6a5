#include "ifsthermo/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ifsthermo/errors.hpp"

namespace ifsthermo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Interval image_of(const MapSpec& f, const Interval& domain) {
  double a = f(domain.lo);
  double b = f(domain.hi);
  return {std::min(a, b), std::max(a, b)};
}

// Both families have a derivative that is affine in x, so its extremes on an
// interval sit at the endpoints.
double max_derivative(const MapSpec& f, const Interval& on) {
  return std::max(std::abs(f.derivative(on.lo)), std::abs(f.derivative(on.hi)));
}

std::string describe(const std::vector<double>& xs) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ", ";
    out << xs[i];
  }
  return out.str();
}

}  // namespace

double MapSpec::operator()(double x) const {
  return std::visit(overloaded{
                        [x](const AffineMap& m) { return m.ratio * x + m.offset; },
                        [x](const QuadraticMap& m) { return m.c * x + m.d + m.e * x * (1.0 - x); },
                    },
                    kind_);
}

double MapSpec::derivative(double x) const {
  return std::visit(overloaded{
                        [](const AffineMap& m) { return m.ratio; },
                        [x](const QuadraticMap& m) { return m.c + m.e * (1.0 - 2.0 * x); },
                    },
                    kind_);
}

double MapSpec::log_derivative_lipschitz(const Interval& on) const {
  return std::visit(overloaded{
                        [](const AffineMap&) { return 0.0; },
                        [&](const QuadraticMap& m) {
                          double lo = std::min(std::abs(derivative(on.lo)), std::abs(derivative(on.hi)));
                          if (lo <= 0.0) return HUGE_VAL;
                          return 2.0 * std::abs(m.e) / lo;
                        },
                    },
                    kind_);
}

bool IfsSpec::is_affine() const {
  return std::all_of(maps.begin(), maps.end(), [](const MapSpec& m) { return m.is_affine(); });
}

IfsSpec IfsSpec::affine(std::vector<AffineMap> maps, Interval domain) {
  IfsSpec spec;
  spec.domain = domain;
  for (const auto& m : maps) spec.maps.emplace_back(m);
  return spec;
}

IfsSpec IfsSpec::two_map_affine(double a0, double a1) {
  return affine({AffineMap{a0, 0.0}, AffineMap{a1, 1.0 - a1}});
}

std::vector<Violation> validate_ifs(const IfsSpec& spec, const ValidationOptions& options) {
  std::vector<Violation> out;
  const Interval& X = spec.domain;
  if (!(X.lo < X.hi) || !std::isfinite(X.lo) || !std::isfinite(X.hi)) {
    out.push_back({"domain", "domain must be a finite interval with lo < hi", {X.lo, X.hi}});
    return out;
  }
  if (spec.alphabet_size() < 2) {
    out.push_back({"alphabet", "at least two maps are required", {}});
  }
  const int grid = std::max(options.grid_points, 2);

  std::vector<Interval> images;
  for (std::size_t a = 0; a < spec.maps.size(); ++a) {
    const MapSpec& f = spec.maps[a];
    double img_lo = HUGE_VAL, img_hi = -HUGE_VAL;
    std::vector<double> outside, flat, expanding;
    double sup_derivative = 0.0;
    for (int g = 0; g < grid; ++g) {
      double x = X.lo + X.length() * g / (grid - 1);
      double y = f(x);
      double dy = f.derivative(x);
      img_lo = std::min(img_lo, y);
      img_hi = std::max(img_hi, y);
      if (!(X.lo <= y && y <= X.hi) && outside.size() < 4) outside.push_back(x);
      if (!(dy > 0.0) && flat.size() < 4) flat.push_back(x);
      if (std::abs(dy) > sup_derivative) sup_derivative = std::abs(dy);
      if (!(std::abs(dy) < 1.0) && expanding.size() < 4) expanding.push_back(x);
    }
    images.push_back({img_lo, img_hi});
    std::string name = "map " + std::to_string(a);
    if (!outside.empty())
      out.push_back({"maps into domain", name + " sends points outside X at x = " + describe(outside), outside});
    if (!flat.empty())
      out.push_back({"orientation", name + " has non-positive derivative at x = " + describe(flat), flat});
    if (!expanding.empty())
      out.push_back({"contraction",
                     name + " has |f'| >= 1 at x = " + describe(expanding) +
                         " (sup on grid " + std::to_string(sup_derivative) + ")",
                     expanding});
  }

  for (std::size_t a = 0; a < images.size(); ++a) {
    for (std::size_t b = a + 1; b < images.size(); ++b) {
      const Interval& I = images[a];
      const Interval& J = images[b];
      if (I.lo <= J.hi && J.lo <= I.hi) {
        double lo = std::max(I.lo, J.lo), hi = std::min(I.hi, J.hi);
        out.push_back({"strong separation",
                       "images of maps " + std::to_string(a) + " and " + std::to_string(b) +
                           " intersect on [" + describe({lo}) + ", " + describe({hi}) + "]",
                       {lo, hi}});
      }
    }
  }

  if (images.size() >= 2) {
    for (std::size_t b = 0; b < images.size(); ++b) {
      if (b != 0 && !(images[0].hi < images[b].lo)) {
        out.push_back({"labeling", "image of map 0 is not left of image of map " + std::to_string(b),
                       {images[0].hi, images[b].lo}});
      }
      if (b != 1 && !(images[1].lo > images[b].hi)) {
        out.push_back({"labeling", "image of map 1 is not right of image of map " + std::to_string(b),
                       {images[1].lo, images[b].hi}});
      }
    }
  }
  return out;
}

void require_valid(const IfsSpec& spec, const ValidationOptions& options) {
  auto violations = validate_ifs(spec, options);
  if (violations.empty()) return;
  std::string msg = "invalid iterated function system:";
  for (const auto& v : violations) msg += " [" + v.condition + "] " + v.detail + ";";
  throw InputError(msg);
}

void check_word(const IfsSpec& spec, std::span<const Symbol> word) {
  const auto n = static_cast<Symbol>(spec.alphabet_size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 0 || word[i] >= n) {
      throw InputError("symbol " + std::to_string(word[i]) + " at position " + std::to_string(i + 1) +
                       " is outside the alphabet [0, " + std::to_string(n) + ")");
    }
  }
}

double apply_word(const IfsSpec& spec, std::span<const Symbol> word, double x) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) x = spec.maps[*it](x);
  return x;
}

double word_derivative(const IfsSpec& spec, std::span<const Symbol> word, double x) {
  double d = 1.0;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const MapSpec& f = spec.maps[*it];
    d *= f.derivative(x);
    x = f(x);
  }
  return d;
}

CylinderInfo cylinder(const IfsSpec& spec, const Word& word) {
  check_word(spec, word);
  double a = apply_word(spec, word, spec.domain.lo);
  double b = apply_word(spec, word, spec.domain.hi);
  return {word, {std::min(a, b), std::max(a, b)}, a};
}

std::vector<Symbol> spatial_order(const IfsSpec& spec) {
  std::vector<Symbol> order(spec.alphabet_size());
  std::vector<double> left(order.size());
  for (std::size_t a = 0; a < order.size(); ++a) {
    order[a] = static_cast<Symbol>(a);
    left[a] = image_of(spec.maps[a], spec.domain).lo;
  }
  std::stable_sort(order.begin(), order.end(), [&](Symbol a, Symbol b) { return left[a] < left[b]; });
  return order;
}

Encoding encode(const IfsSpec& spec, double x, int depth) {
  if (!spec.domain.contains(x)) {
    throw InputError("encode: x = " + describe({x}) + " lies outside the domain");
  }
  if (depth < 1) throw InputError("encode: depth must be at least 1");
  const auto order = spatial_order(spec);
  Encoding result;
  result.word.reserve(depth);
  for (int level = 0; level < depth; ++level) {
    bool found = false;
    result.word.push_back(0);
    // Ties on a shared boundary go to the leftmost cylinder.
    for (Symbol a : order) {
      result.word.back() = a;
      const double p = apply_word(spec, result.word, spec.domain.lo);
      const double q = apply_word(spec, result.word, spec.domain.hi);
      if (std::min(p, q) <= x && x <= std::max(p, q)) {
        found = true;
        break;
      }
    }
    if (!found) {
      result.word.pop_back();
      result.in_gap = true;
      break;
    }
  }
  return result;
}

CodedPoint CodedPoint::constant(Word prefix, Symbol symbol) {
  return CodedPoint{std::move(prefix), Word{symbol}};
}

CodedPoint CodedPoint::periodic(Word prefix, Word period) {
  if (period.empty()) throw InputError("coded point: tail period must be non-empty");
  return CodedPoint{std::move(prefix), std::move(period)};
}

bool CodedPoint::eventually_constant() const {
  if (period.empty()) return false;
  const Symbol s = period.front();
  if (s != 0 && s != 1) return false;
  return std::all_of(period.begin(), period.end(), [s](Symbol t) { return t == s; });
}

Symbol CodedPoint::symbol_at(std::size_t index) const {
  if (index < prefix.size()) return prefix[index];
  if (period.empty()) throw InputError("coded point: tail period must be non-empty");
  return period[(index - prefix.size()) % period.size()];
}

Word CodedPoint::expand(std::size_t length) const {
  Word w(length);
  for (std::size_t i = 0; i < length; ++i) w[i] = symbol_at(i);
  return w;
}

CodedPoint CodedPoint::shifted(std::size_t n) const {
  if (n <= prefix.size()) return CodedPoint{Word(prefix.begin() + n, prefix.end()), period};
  const std::size_t r = (n - prefix.size()) % period.size();
  Word rotated(period.begin() + r, period.end());
  rotated.insert(rotated.end(), period.begin(), period.begin() + r);
  return CodedPoint{{}, std::move(rotated)};
}

double decode(const IfsSpec& spec, const CodedPoint& point, double tolerance) {
  if (!(tolerance > 0.0)) throw InputError("decode: tolerance must be positive");
  if (point.period.empty()) throw InputError("decode: tail period must be non-empty");
  check_word(spec, point.prefix);
  check_word(spec, point.period);

  double rho = 0.0;
  for (const auto& f : spec.maps) rho = std::max(rho, max_derivative(f, spec.domain));
  if (!(rho < 1.0)) throw InputError("decode: system is not contracting");

  // Expected length from the contraction bound, then grow until the nested
  // cylinder is narrow enough or stops shrinking in floating point.
  const double span = spec.domain.length();
  std::size_t n = point.prefix.size() + 1;
  if (rho > 0.0 && tolerance < span) {
    n = std::max(n, static_cast<std::size_t>(std::ceil(std::log(tolerance / span) / std::log(rho))) + 1);
  }
  double previous = HUGE_VAL;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Word w = point.expand(n);
    const double a = apply_word(spec, w, spec.domain.lo);
    const double b = apply_word(spec, w, spec.domain.hi);
    const double diam = std::abs(b - a);
    if (diam < tolerance || !(diam < previous)) return 0.5 * (a + b);
    previous = diam;
    n *= 2;
  }
  throw NumericalError("decode: nested cylinders did not reach the requested tolerance");
}

double fixed_point(const IfsSpec& spec, Symbol symbol) {
  const Symbol s[1] = {symbol};
  check_word(spec, s);
  const MapSpec& f = spec.maps[symbol];
  if (const auto* m = std::get_if<AffineMap>(&f.kind())) return m->offset / (1.0 - m->ratio);
  double x = spec.domain.midpoint();
  for (int it = 0; it < 10000; ++it) {
    const double next = f(x);
    if (std::abs(next - x) <= 1e-14) return next;
    x = next;
  }
  throw NumericalError("fixed_point: iteration of map " + std::to_string(symbol) + " did not converge");
}

double distortion_constant(const IfsSpec& spec) {
  double rho = 0.0, lipschitz = 0.0;
  for (const auto& f : spec.maps) {
    rho = std::max(rho, max_derivative(f, spec.domain));
    lipschitz = std::max(lipschitz, f.log_derivative_lipschitz(spec.domain));
  }
  if (lipschitz == 0.0) return 1.0;
  if (!(rho < 1.0)) return HUGE_VAL;
  return std::exp(lipschitz * spec.domain.length() / (1.0 - rho));
}

}  // namespace ifsthermo
