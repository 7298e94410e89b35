#ifndef RICWAVE_IO_CONFIG_HPP
#define RICWAVE_IO_CONFIG_HPP

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ricwave/numfmt.hpp"
#include "ricwave/types.hpp"

// Flat key = value configuration with [section] headers. Keys are stored fully
// qualified as "section.key" in insertion order, so a file round-trips
// losslessly and the serialised form is canonical input for the config hash.

namespace ricwave {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class RunConfig {
 public:
  void set(const std::string& key, const std::string& value) {
    for (auto& kv : items_)
      if (kv.first == key) {
        kv.second = value;
        return;
      }
    items_.emplace_back(key, value);
  }

  void set(const std::string& key, double value) { set(key, g17(value)); }

  bool has(const std::string& key) const {
    return std::any_of(items_.begin(), items_.end(),
                       [&](const auto& kv) { return kv.first == key; });
  }

  std::string get(const std::string& key, const std::string& fallback = "") const {
    for (const auto& kv : items_)
      if (kv.first == key) return kv.second;
    return fallback;
  }

  double get_double(const std::string& key, double fallback) const {
    const std::string s = get(key);
    if (s.empty()) return fallback;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
      throw UsageError("config: key '" + key + "' has non-numeric value '" + s + "'");
    return v;
  }

  int get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, fallback);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw UsageError("config: key '" + key + "' must be an integer");
    return i;
  }

  const std::vector<std::pair<std::string, std::string>>& items() const {
    return items_;
  }

  // Canonical text: sections in first-use order, "key = value" lines.
  std::string serialize() const {
    std::ostringstream os;
    std::vector<std::string> sections;
    for (const auto& kv : items_) {
      const std::string sec = section_of(kv.first);
      if (std::find(sections.begin(), sections.end(), sec) == sections.end())
        sections.push_back(sec);
    }
    bool first = true;
    for (const auto& sec : sections) {
      if (!first) os << "\n";
      first = false;
      if (!sec.empty()) os << "[" << sec << "]\n";
      for (const auto& kv : items_)
        if (section_of(kv.first) == sec)
          os << base_of(kv.first) << " = " << kv.second << "\n";
    }
    return os.str();
  }

  static RunConfig parse(std::istream& in) {
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string s = trim(line);
      if (s.empty() || s[0] == '#') continue;
      if (s.front() == '[') {
        if (s.back() != ']')
          throw UsageError("config line " + std::to_string(lineno) +
                           ": unterminated section header");
        section = trim(s.substr(1, s.size() - 2));
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos)
        throw UsageError("config line " + std::to_string(lineno) +
                         ": expected key = value");
      const std::string key = trim(s.substr(0, eq));
      const std::string value = trim(s.substr(eq + 1));
      if (key.empty())
        throw UsageError("config line " + std::to_string(lineno) + ": empty key");
      cfg.set(section.empty() ? key : section + "." + key, value);
    }
    return cfg;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("config: cannot open '" + path + "'");
    return parse(in);
  }

 private:
  static std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
  }
  static std::string section_of(const std::string& key) {
    const auto dot = key.find('.');
    return dot == std::string::npos ? "" : key.substr(0, dot);
  }
  static std::string base_of(const std::string& key) {
    const auto dot = key.find('.');
    return dot == std::string::npos ? key : key.substr(dot + 1);
  }

  std::vector<std::pair<std::string, std::string>> items_;
};

}  // namespace ricwave

#endif
