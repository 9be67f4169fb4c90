#include "dft/ext_time.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dft {

ExtTime ExtTime::Finite(double t) {
  if (!(t >= 0.0) || std::isinf(t)) {
    throw std::invalid_argument("finite failure time must be in [0, inf)");
  }
  return ExtTime(t);
}

std::string to_string(ExtTime t) {
  if (!t.is_finite()) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", t.value());
  return buf;
}

}  // namespace dft
