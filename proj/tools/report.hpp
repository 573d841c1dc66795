#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace floquet::cli {

constexpr int kSchemaVersion = 1;

// %.17g; non-finite values become the strings "inf", "-inf" and "nan".
std::string format_double(double v);

void write_json(std::ostream& os, const nlohmann::json& j, int indent = 2);
std::string dump_json(const nlohmann::json& j);

// CSV with a fixed header; cells are numbers or bare words.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  CsvTable& add(double v);
  CsvTable& add(long long v);
  CsvTable& add(const std::string& word);
  void end_row();
  size_t rows() const { return rows_; }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::string body_;
  std::vector<std::string> current_;
  size_t rows_ = 0;
};

// Writes to path, or to stdout when path is empty or "-". Throws NumericalError when the file
// cannot be written.
void write_output(const std::string& path, const std::string& text);

}  // namespace floquet::cli
