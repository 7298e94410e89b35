#ifndef RICWAVE_IO_CSV_HPP
#define RICWAVE_IO_CSV_HPP

#include <ostream>
#include <string>
#include <vector>

#include "ricwave/io/version.hpp"
#include "ricwave/numfmt.hpp"

// CSV emission: every file carries the tool version and the hash of the
// effective configuration as comment lines, then a header row, then data rows
// with doubles at 17 significant digits.

namespace ricwave {

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::string& canonical_config,
            const std::vector<std::string>& columns)
      : os_(os) {
    os_ << version_comment() << "\n" << hash_comment(canonical_config) << "\n";
    write_strings(columns);
  }

  void write_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
  }

  class Row {
   public:
    explicit Row(std::ostream& os) : os_(os) {}
    Row& operator<<(double v) {
      sep();
      os_ << g17(v);
      return *this;
    }
    Row& operator<<(int v) {
      sep();
      os_ << v;
      return *this;
    }
    Row& operator<<(const std::string& v) {
      sep();
      os_ << v;
      return *this;
    }
    ~Row() { os_ << "\n"; }

   private:
    void sep() {
      if (!first_) os_ << ",";
      first_ = false;
    }
    std::ostream& os_;
    bool first_ = true;
  };

  Row row() { return Row(os_); }

 private:
  std::ostream& os_;
};

}  // namespace ricwave

#endif
