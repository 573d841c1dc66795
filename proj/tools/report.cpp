#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "floquet/common.hpp"

namespace floquet::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void emit(std::ostream& os, const nlohmann::json& j, int indent, int depth) {
  using nlohmann::json;
  const std::string pad(static_cast<size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        emit(os, it.value(), indent, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ", ";
        first = false;
        emit(os, v, indent, depth + 1);
      }
      os << "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        os << format_double(v);
      else
        os << '"' << format_double(v) << '"';
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

void write_json(std::ostream& os, const nlohmann::json& j, int indent) {
  emit(os, j, indent, 0);
  os << "\n";
}

std::string dump_json(const nlohmann::json& j) {
  std::ostringstream os;
  write_json(os, j);
  return os.str();
}

CsvTable& CsvTable::add(double v) {
  current_.push_back(format_double(v));
  return *this;
}

CsvTable& CsvTable::add(long long v) {
  current_.push_back(std::to_string(v));
  return *this;
}

CsvTable& CsvTable::add(const std::string& word) {
  current_.push_back(word);
  return *this;
}

void CsvTable::end_row() {
  if (current_.size() != header_.size()) throw NumericalError("csv row width does not match the header");
  for (size_t i = 0; i < current_.size(); ++i) body_ += (i ? "," : "") + current_[i];
  body_ += "\n";
  current_.clear();
  ++rows_;
}

std::string CsvTable::str() const {
  std::string out;
  for (size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
  return out + "\n" + body_;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericalError("emit_report: cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw NumericalError("emit_report: write to '" + path + "' failed");
}

}  // namespace floquet::cli
