#ifndef RICWAVE_NUMFMT_HPP
#define RICWAVE_NUMFMT_HPP

#include <cstdio>
#include <string>

namespace ricwave {

// 17 significant digits: exact round-trip for IEEE doubles, locale-independent.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ricwave

#endif
