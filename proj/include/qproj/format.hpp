#pragma once

#include <cstdio>
#include <string>

namespace qproj {

// 17 significant digits, round-trip exact for doubles.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace qproj
