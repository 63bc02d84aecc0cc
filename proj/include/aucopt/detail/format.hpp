#pragma once

#include <cstdio>
#include <string>

namespace aucopt::detail {

/// %.17g: enough digits to round-trip a double exactly, byte-stable across
/// reruns.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace aucopt::detail
