#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace horo::harness {

// Pinned float formatting for every numeric CSV cell: 17 significant digits
// round-trip doubles exactly, and the textual form is stable across runs.
inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

// Minimal CSV emitter: comma separators, LF line endings, no quoting (cells
// are produced by this codebase and never contain commas or newlines).
class CsvWriter {
public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& text) { out_ << "# " << text << "\n"; }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << "\n";
  }

private:
  std::ostream& out_;
};

}  // namespace horo::harness
