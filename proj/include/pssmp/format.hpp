#pragma once

#include <cstdio>
#include <string>

namespace pssmp {

// Shortest round-trip-safe decimal form.
inline std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace pssmp
