#pragma once

// Deterministic text emission: every real number is printed in scientific
// notation with 12 significant digits and a lowercase exponent marker.

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace kerrphc::cli {

std::string format_real(double value);

/// Pretty-printed JSON (2-space indent, keys in insertion order) with reals
/// through format_real. Non-finite reals become null.
std::string dump_json(const nlohmann::ordered_json& doc);

/// Compact single-line variant.
std::string dump_json_line(const nlohmann::ordered_json& doc);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns);

  CsvWriter& real(double v);
  CsvWriter& integer(long v);
  void end_row();

 private:
  void sep();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

}  // namespace kerrphc::cli
