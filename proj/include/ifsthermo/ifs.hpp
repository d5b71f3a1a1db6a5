#pragma once

// Iterated function systems on a real interval: maps, validation, symbolic
// coding and cylinder geometry.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ifsthermo {

using Symbol = int;
using Word = std::vector<Symbol>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// x -> ratio * x + offset
struct AffineMap {
  double ratio;
  double offset;
};

// x -> c*x + d + e*x*(1-x), the built-in smooth non-affine family.
struct QuadraticMap {
  double c;
  double d;
  double e;
};

class MapSpec {
 public:
  using Kind = std::variant<AffineMap, QuadraticMap>;

  MapSpec(AffineMap m) : kind_(m) {}
  MapSpec(QuadraticMap m) : kind_(m) {}

  double operator()(double x) const;
  double derivative(double x) const;
  // Upper bound for |f''| / f' on the interval; zero for affine maps.
  double log_derivative_lipschitz(const Interval& on) const;

  bool is_affine() const { return std::holds_alternative<AffineMap>(kind_); }
  const Kind& kind() const { return kind_; }

 private:
  Kind kind_;
};

struct IfsSpec {
  // Index 0 codes the leftmost first-level image, index 1 the rightmost.
  std::vector<MapSpec> maps;
  Interval domain{0.0, 1.0};

  std::size_t alphabet_size() const { return maps.size(); }
  bool is_affine() const;

  static IfsSpec affine(std::vector<AffineMap> maps, Interval domain = {0.0, 1.0});
  // Two similarities of ratios a0, a1 pinned to the ends of [0,1]:
  // f_0(x) = a0*x and f_1(x) = a1*x + 1 - a1.
  static IfsSpec two_map_affine(double a0, double a1);
  static IfsSpec middle_thirds() { return two_map_affine(1.0 / 3.0, 1.0 / 3.0); }
};

struct Violation {
  std::string condition;
  std::string detail;
  std::vector<double> witnesses;
};

struct ValidationOptions {
  int grid_points = 1024;
};

std::vector<Violation> validate_ifs(const IfsSpec& spec, const ValidationOptions& options = {});

// Throws InputError if any violation is present.
void require_valid(const IfsSpec& spec, const ValidationOptions& options = {});

void check_word(const IfsSpec& spec, std::span<const Symbol> word);

// f_w(x) = f_{w1} o f_{w2} o ... o f_{wn}(x)
double apply_word(const IfsSpec& spec, std::span<const Symbol> word, double x);
// (f_w)'(x) by the chain rule.
double word_derivative(const IfsSpec& spec, std::span<const Symbol> word, double x);

struct CylinderInfo {
  Word word;
  Interval interval;
  double anchor;  // f_w(domain.lo)
};

CylinderInfo cylinder(const IfsSpec& spec, const Word& word);

// Symbols sorted by the position of their first-level image, left to right.
std::vector<Symbol> spatial_order(const IfsSpec& spec);

struct Encoding {
  Word word;
  bool in_gap = false;  // word is the longest prefix whose cylinder holds x
};

Encoding encode(const IfsSpec& spec, double x, int depth);

// A point of the limit set coded by prefix followed by an infinitely
// repeated period. A constant tail is a period of length one.
struct CodedPoint {
  Word prefix;
  Word period;

  static CodedPoint constant(Word prefix, Symbol symbol);
  static CodedPoint periodic(Word prefix, Word period);

  // Membership in the endpoint set: the code is eventually all 0 or all 1.
  bool eventually_constant() const;
  Symbol symbol_at(std::size_t index) const;
  Word expand(std::size_t length) const;
  // The point shifted left by n symbols, still in prefix/period form.
  CodedPoint shifted(std::size_t n) const;
};

double decode(const IfsSpec& spec, const CodedPoint& point, double tolerance);

double fixed_point(const IfsSpec& spec, Symbol symbol);

// Bound K with |f_w'(x)| / |f_w'(y)| in [1/K, K] for all words and x, y in X.
double distortion_constant(const IfsSpec& spec);

}  // namespace ifsthermo
