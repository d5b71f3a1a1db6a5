#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ifsthermo/errors.hpp"
#include "ifsthermo/ifs.hpp"

using namespace ifsthermo;

namespace {

IfsSpec nonlinear_pair() {
  return IfsSpec{{MapSpec(QuadraticMap{0.3, 0.05, 0.05}), MapSpec(QuadraticMap{0.3, 0.65, 0.05})}, {0.0, 1.0}};
}

bool has_condition(const std::vector<Violation>& v, const std::string& name) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.condition == name; });
}

Word random_word(std::mt19937& rng, std::size_t alphabet, std::size_t length) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(alphabet) - 1);
  Word w(length);
  for (auto& s : w) s = pick(rng);
  return w;
}

}  // namespace

TEST_CASE("validate_ifs accepts the middle-thirds system") {
  CHECK(validate_ifs(IfsSpec::affine({{1.0 / 3, 0.0}, {1.0 / 3, 2.0 / 3}})).empty());
}

TEST_CASE("validate_ifs reports overlapping images") {
  const auto v = validate_ifs(IfsSpec::affine({{0.6, 0.0}, {0.5, 0.5}}));
  REQUIRE(has_condition(v, "strong separation"));
  for (const auto& x : v) {
    if (x.condition == "strong separation") CHECK_FALSE(x.witnesses.empty());
  }
}

TEST_CASE("validate_ifs accepts ratios 0.1 and 0.5") {
  CHECK(validate_ifs(IfsSpec::affine({{0.1, 0.0}, {0.5, 0.5}})).empty());
  CHECK(validate_ifs(nonlinear_pair()).empty());
}

TEST_CASE("validate_ifs flags the other standing hypotheses") {
  CHECK(has_condition(validate_ifs(IfsSpec::affine({{0.3, 0.0}})), "alphabet"));
  CHECK(has_condition(validate_ifs(IfsSpec::affine({{0.3, 0.8}, {0.2, 0.0}})), "maps into domain"));
  CHECK(has_condition(validate_ifs(IfsSpec::affine({{0.3, 0.7}, {0.2, 0.0}})), "labeling"));
  CHECK(has_condition(validate_ifs(IfsSpec::affine({{-0.3, 0.3}, {0.2, 0.8}})), "orientation"));
  CHECK_THROWS_AS(require_valid(IfsSpec::affine({{0.6, 0.0}, {0.5, 0.5}})), InputError);
}

TEST_CASE("cylinder intervals of the middle-thirds system") {
  const IfsSpec mt = IfsSpec::middle_thirds();
  const auto c0 = cylinder(mt, {0});
  CHECK(c0.interval.lo == doctest::Approx(0.0));
  CHECK(c0.interval.hi == doctest::Approx(1.0 / 3));
  const auto c01 = cylinder(mt, {0, 1});
  CHECK(c01.interval.lo == doctest::Approx(2.0 / 9).epsilon(1e-15));
  CHECK(c01.interval.hi == doctest::Approx(3.0 / 9).epsilon(1e-15));
  CHECK(c01.anchor == c01.interval.lo);
  const auto whole = cylinder(mt, {});
  CHECK(whole.interval.lo == 0.0);
  CHECK(whole.interval.hi == 1.0);
}

TEST_CASE("cylinder (1,0) of the 0.1/0.5 system matches hand composition") {
  const IfsSpec s = IfsSpec::two_map_affine(0.1, 0.5);
  auto f0 = [](double x) { return 0.1 * x; };
  auto f1 = [](double x) { return 0.5 * x + 0.5; };
  const auto c = cylinder(s, {1, 0});
  CHECK(c.interval.lo == doctest::Approx(f1(f0(0.0))).epsilon(1e-15));
  CHECK(c.interval.hi == doctest::Approx(f1(f0(1.0))).epsilon(1e-15));
  CHECK(c.interval.lo == doctest::Approx(0.5));
  CHECK(c.interval.hi == doctest::Approx(0.55));
}

TEST_CASE("cylinder rejects out-of-range symbols") {
  CHECK_THROWS_AS(cylinder(IfsSpec::middle_thirds(), {0, 2}), InputError);
  CHECK_THROWS_AS(cylinder(IfsSpec::middle_thirds(), {-1}), InputError);
}

TEST_CASE("encode") {
  const IfsSpec mt = IfsSpec::middle_thirds();
  const auto e = encode(mt, 0.7, 2);
  CHECK_FALSE(e.in_gap);
  CHECK(e.word == Word{1, 0});

  const auto gap = encode(mt, 0.5, 1);
  CHECK(gap.in_gap);
  CHECK(gap.word.empty());

  CHECK(encode(mt, 0.0, 7).word == Word(7, 0));
  const IfsSpec nl = nonlinear_pair();
  CHECK(encode(nl, fixed_point(nl, 0), 5).word == Word(5, 0));
  // 0 lies left of the limit set.
  CHECK(encode(nl, 0.0, 5).in_gap);

  CHECK_THROWS_AS(encode(mt, 1.5, 3), InputError);
  CHECK_THROWS_AS(encode(mt, -0.1, 3), InputError);
}

TEST_CASE("encode puts shared boundary points in the left cylinder") {
  // Touching images: [0, 1/2] and [1/2, 1].
  const IfsSpec touching = IfsSpec::affine({{0.5, 0.0}, {0.5, 0.5}});
  CHECK(encode(touching, 0.5, 1).word == Word{0});
}

TEST_CASE("decode") {
  const IfsSpec mt = IfsSpec::middle_thirds();
  CHECK(decode(mt, CodedPoint::constant({}, 0), 1e-12) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(decode(mt, CodedPoint::constant({}, 0), 1e-12)) <= 1e-12);
  CHECK(std::abs(decode(mt, CodedPoint::constant({}, 1), 1e-12) - 1.0) <= 1e-12);
  CHECK(std::abs(decode(mt, CodedPoint::periodic({}, {0, 1}), 1e-12) - 0.25) <= 1e-12);
  CHECK_THROWS_AS(decode(mt, CodedPoint::constant({}, 0), 0.0), InputError);
  CHECK_THROWS_AS(decode(mt, CodedPoint::constant({}, 0), -1.0), InputError);
}

TEST_CASE("coded points and the endpoint set") {
  CHECK(CodedPoint::constant({1, 0}, 0).eventually_constant());
  CHECK(CodedPoint::constant({}, 1).eventually_constant());
  CHECK(CodedPoint::periodic({0}, {1, 1}).eventually_constant());
  CHECK_FALSE(CodedPoint::periodic({}, {0, 1}).eventually_constant());
  const CodedPoint p = CodedPoint::periodic({1, 1, 0}, {0, 1});
  CHECK(p.expand(7) == Word{1, 1, 0, 0, 1, 0, 1});
  CHECK(p.shifted(4).expand(3) == Word{1, 0, 1});
  CHECK(p.symbol_at(5) == 0);
}

TEST_CASE("fixed points") {
  CHECK(fixed_point(IfsSpec::affine({{0.1, 0.0}, {1.0 / 3, 2.0 / 3}}), 1) == doctest::Approx(1.0));
  CHECK(fixed_point(IfsSpec::affine({{0.1, 0.0}, {1.0 / 3, 2.0 / 3}}), 0) == 0.0);

  // Oracle: 200 plain iterations from the midpoint.
  const IfsSpec nl = nonlinear_pair();
  double x = 0.5;
  for (int i = 0; i < 200; ++i) x = 0.3 * x + 0.05 + 0.05 * x * (1 - x);
  CHECK(std::abs(fixed_point(nl, 0) - x) <= 1e-13);
  CHECK_THROWS_AS(fixed_point(nl, 2), InputError);
}

TEST_CASE("nesting of cylinders to depth 12") {
  std::mt19937 rng(7);
  for (const IfsSpec& spec : {IfsSpec::two_map_affine(0.1, 0.5), nonlinear_pair(),
                              IfsSpec::affine({{0.2, 0.0}, {0.25, 0.75}, {0.1, 0.4}})}) {
    for (int trial = 0; trial < 200; ++trial) {
      Word w = random_word(rng, spec.alphabet_size(), 12);
      Interval outer = spec.domain;
      for (std::size_t n = 1; n <= w.size(); ++n) {
        const Interval inner = cylinder(spec, Word(w.begin(), w.begin() + n)).interval;
        REQUIRE(outer.lo <= inner.lo);
        REQUIRE(inner.hi <= outer.hi);
        REQUIRE(inner.length() < outer.length());
        outer = inner;
      }
    }
  }
}

TEST_CASE("encode inverts decode away from boundaries") {
  std::mt19937 rng(11);
  for (const IfsSpec& spec : {IfsSpec::middle_thirds(), IfsSpec::two_map_affine(0.1, 0.5), nonlinear_pair()}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Word prefix = random_word(rng, 2, 1 + trial % 10);
      const Word period = {0, 1, 1};
      const double x = decode(spec, CodedPoint::periodic(prefix, period), 1e-14);
      const Encoding e = encode(spec, x, static_cast<int>(prefix.size()));
      REQUIRE_FALSE(e.in_gap);
      REQUIRE(e.word == prefix);
    }
  }
}

TEST_CASE("cylinders at a level partition in labeling order") {
  for (const IfsSpec& spec : {IfsSpec::two_map_affine(0.1, 0.5), nonlinear_pair(),
                              IfsSpec::affine({{0.2, 0.0}, {0.25, 0.75}, {0.1, 0.4}})}) {
    const auto order = spatial_order(spec);
    CHECK(order.front() == 0);
    CHECK(order.back() == 1);
    for (int n = 1; n <= 6; ++n) {
      // Words in lexicographic order under the spatial order of the letters.
      std::vector<Word> words{{}};
      for (int k = 0; k < n; ++k) {
        std::vector<Word> next;
        for (const Word& w : words) {
          for (Symbol a : order) {
            Word x = w;
            x.push_back(a);
            next.push_back(x);
          }
        }
        words.swap(next);
      }
      for (std::size_t i = 0; i + 1 < words.size(); ++i) {
        REQUIRE(cylinder(spec, words[i]).interval.hi < cylinder(spec, words[i + 1]).interval.lo);
      }
    }
  }
}

TEST_CASE("bounded distortion at depth 12") {
  std::mt19937 rng(3);
  const IfsSpec affine = IfsSpec::two_map_affine(0.1, 0.5);
  CHECK(distortion_constant(affine) == 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Word w = random_word(rng, 2, 12);
    CHECK(word_derivative(affine, w, 0.0) == doctest::Approx(word_derivative(affine, w, 1.0)).epsilon(1e-13));
  }
  const IfsSpec nl = nonlinear_pair();
  const double K = distortion_constant(nl);
  CHECK(K > 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Word w = random_word(rng, 2, 12);
    const double ratio = word_derivative(nl, w, 0.0) / word_derivative(nl, w, 1.0);
    REQUIRE(ratio <= K);
    REQUIRE(ratio >= 1.0 / K);
  }
}
