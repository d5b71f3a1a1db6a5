#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ifsthermo/ifs.hpp"

namespace ifsthermo::detail {

// Sample tail coordinates: both ends and the midpoint of X.
inline std::array<double, 3> sample_points(const Interval& X) { return {X.lo, X.midpoint(), X.hi}; }

struct SuffixNode {
  std::array<double, 3> y;  // f_w(sample_j)
  std::array<double, 3> s;  // S_n g at the point coded by (w, sample_j)
};

// Depth-first walk over all words w of length 1..depth. Words are grown by
// prepending a symbol, so f_{aw}(x) = f_a(f_w(x)) and S_{n+1} g(aw, x) =
// g(a, f_w(x)) + S_n g(w, x) are both O(1) updates. The word index is the
// base-|A| number with the first symbol most significant.
//
// g(symbol, tail_x) evaluates the potential; visit(level, index, node, counts)
// is called once per word with the per-symbol occurrence counts.
template <class Potential, class Visit>
void walk_suffix_tree(const IfsSpec& spec, int depth, const Potential& g, Visit&& visit) {
  const std::size_t alphabet = spec.alphabet_size();
  std::vector<std::uint64_t> power(depth + 1, 1);
  for (int k = 1; k <= depth; ++k) power[k] = power[k - 1] * alphabet;
  std::vector<std::uint16_t> counts(alphabet, 0);

  auto recurse = [&](auto&& self, int level, std::uint64_t index, const SuffixNode& node) -> void {
    if (level == depth) return;
    for (std::size_t a = 0; a < alphabet; ++a) {
      const MapSpec& f = spec.maps[a];
      SuffixNode child;
      for (int j = 0; j < 3; ++j) {
        child.s[j] = node.s[j] + g(static_cast<Symbol>(a), node.y[j]);
        child.y[j] = f(node.y[j]);
      }
      const std::uint64_t child_index = a * power[level] + index;
      ++counts[a];
      visit(level + 1, child_index, child, counts);
      self(self, level + 1, child_index, child);
      --counts[a];
    }
  };
  SuffixNode root{sample_points(spec.domain), {0.0, 0.0, 0.0}};
  recurse(recurse, 0, 0, root);
}

}  // namespace ifsthermo::detail
