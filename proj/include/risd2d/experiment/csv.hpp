#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "risd2d/core.hpp"

namespace risd2d::experiment {

// Shortest round-trip decimal form; "nan" for masked cells.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string format_number(std::int64_t v) { return std::to_string(v); }

inline std::string quote_field(const std::string& f) {
  if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char ch : f) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

// In-memory CSV table with a fixed header; written in one go.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  class Row {
   public:
    Row& operator<<(const std::string& s) { cells_.push_back(s); return *this; }
    Row& operator<<(const char* s) { cells_.emplace_back(s); return *this; }
    Row& operator<<(double v) { cells_.push_back(format_number(v)); return *this; }
    Row& operator<<(int v) { cells_.push_back(std::to_string(v)); return *this; }
    Row& operator<<(std::uint64_t v) { cells_.push_back(std::to_string(v)); return *this; }

   private:
    friend class CsvTable;
    std::vector<std::string> cells_;
  };

  void add(const Row& r) {
    if (r.cells_.size() != header_.size())
      throw NumericError("csv row has " + std::to_string(r.cells_.size()) + " cells, header has " +
                         std::to_string(header_.size()));
    rows_.push_back(r.cells_);
  }

  std::size_t size() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += quote_field(cells[i]);
      }
      out += "\r\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    f << str();
    if (!f) throw IoError("write failed for '" + path + "'");
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace risd2d::experiment
