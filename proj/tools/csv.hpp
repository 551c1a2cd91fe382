#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "alohamon/errors.hpp"

namespace alohamon::cli {

/// CSV emitter: '#'-prefixed provenance comments, one header row, then data
/// rows whose field count must match the header. Floats carry 15 significant
/// digits so analytic columns round-trip.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw ConfigError("cannot open output file: " + path);
  }

  static std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
  }

  static std::string num(std::int64_t v) { return std::to_string(v); }
  static std::string num(std::uint64_t v) { return std::to_string(v); }
  static std::string num(int v) { return std::to_string(v); }

  void comment(const std::string& line) { out_ << "# " << line << "\n"; }

  void header(const std::vector<std::string>& columns) {
    columns_ = columns.size();
    write_row(columns);
  }

  void row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) {
      throw ConfigError("row width " + std::to_string(fields.size()) +
                        " does not match header width " + std::to_string(columns_));
    }
    write_row(fields);
  }

 private:
  void write_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << quoted(fields[i]);
    }
    out_ << "\n";
  }

  static std::string quoted(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string q = "\"";
    for (char c : field) {
      if (c == '"') q += '"';
      q += c;
    }
    q += '"';
    return q;
  }

  std::ofstream out_;
  std::size_t columns_ = 0;
};

}  // namespace alohamon::cli
