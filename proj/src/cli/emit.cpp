#include "kerrphc/cli/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kerrphc::cli {

std::string format_real(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", value);
  return buf;
}

namespace {

void write(const nlohmann::ordered_json& j, std::string& out, int indent, int depth) {
  const bool pretty = indent > 0;
  const auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(d * indent), ' ');
  };
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += nlohmann::json(key).dump();
        out += pretty ? ": " : ":";
        write(value, out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; they are table rows or [re, im].
      const bool flat = std::none_of(j.begin(), j.end(), [](const auto& v) {
        return v.is_object() || v.is_array();
      });
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(value, out, flat ? 0 : indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_real(v) : "null";
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& doc) {
  std::string out;
  write(doc, out, 2, 0);
  out += '\n';
  return out;
}

std::string dump_json_line(const nlohmann::ordered_json& doc) {
  std::string out;
  write(doc, out, 0, 0);
  out += '\n';
  return out;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns)
    : out_(out), columns_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::sep() {
  if (filled_ >= columns_) throw std::logic_error("CSV row has too many fields");
  if (filled_ > 0) out_ << ',';
  ++filled_;
}

CsvWriter& CsvWriter::real(double v) {
  sep();
  out_ << format_real(v);
  return *this;
}

CsvWriter& CsvWriter::integer(long v) {
  sep();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("CSV row has too few fields");
  out_ << '\n';
  filled_ = 0;
}

}  // namespace kerrphc::cli
