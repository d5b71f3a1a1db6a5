#pragma once

#include <cmath>
#include <string>

#include "ifsthermo/errors.hpp"

namespace ifsthermo {

// Bisection for an increasing function with f(lo) < 0 < f(hi). Stops when the
// bracket is narrower than tolerance or can no longer be split in floating
// point.
template <class F>
double bisect_increasing(F&& f, double lo, double hi, double tolerance, int max_iterations, const char* what) {
  for (int it = 0; it < max_iterations; ++it) {
    if (hi - lo <= tolerance) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi)) return mid;
    const double v = f(mid);
    if (std::isnan(v)) throw NumericalError(std::string(what) + ": function is NaN at " + std::to_string(mid));
    if (v < 0.0) {
      lo = mid;
    } else if (v > 0.0) {
      hi = mid;
    } else {
      return mid;
    }
  }
  if (hi - lo <= 4.0 * tolerance) return 0.5 * (lo + hi);
  throw NumericalError(std::string(what) + ": bisection did not converge within the iteration limit");
}

}  // namespace ifsthermo
