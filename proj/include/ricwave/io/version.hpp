#ifndef RICWAVE_IO_VERSION_HPP
#define RICWAVE_IO_VERSION_HPP

#include <cstdint>
#include <cstdio>
#include <string>

namespace ricwave {

inline constexpr const char* kToolName = "ricwave";
inline constexpr const char* kToolVersion = "1.0.0";

// FNV-1a over the canonical config text; stable across platforms, so output
// files are byte-identical for identical configurations.
inline std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string version_comment() {
  return std::string("# tool: ") + kToolName + " " + kToolVersion;
}

inline std::string hash_comment(const std::string& canonical) {
  return "# config-hash: " + config_hash(canonical);
}

}  // namespace ricwave

#endif
