#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperhardy/errors.hpp"

namespace hyperhardy {

/// 17 significant digits, '.' decimal point, locale independent.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw ArgumentError("CSV table needs a header");
  }

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
      throw ArgumentError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                          std::to_string(header_.size()));
    rows_.push_back(std::move(cells));
  }

  void add_values(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_row(std::move(cells));
  }

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  std::string to_string() const {
    std::ostringstream out;
    write_line(out, header_);
    for (const auto& r : rows_) write_line(out, r);
    return out.str();
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << to_string();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;

  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }

  static void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << quote(cells[i]);
    out << '\n';
  }
};

}  // namespace hyperhardy
