#pragma once

#include <cstdio>
#include <string>

namespace ifsthermo {

// Round-trip decimal text for a double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ifsthermo
