#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace skyselect {

// Minimal CSV: comma separated, no quoting (no field in any schema contains a
// comma), trailing \r tolerated, blank lines skipped.
class CsvReader {
 public:
  explicit CsvReader(const std::string& path);

  // Advances to the next non-blank row; returns false at EOF.
  bool next_row();

  const std::vector<std::string_view>& fields() const { return fields_; }
  size_t line_number() const { return line_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::string line_buf_;
  std::vector<std::string_view> fields_;
  size_t line_ = 0;
};

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();

  void write_row(const std::vector<std::string>& cells);
  void write_raw(std::string_view text);  // caller supplies the newline
  void close();

 private:
  std::string path_;
  std::ofstream out_;
  std::string buf_;
  void flush_if_large();
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Loads a small CSV fully (feature tables, manifests, metrics).
CsvTable read_csv_table(const std::string& path);

// Strict full-cell numeric parse; `context` names file/row/column on error.
double parse_double_cell(std::string_view cell, const std::string& context);
long parse_long_cell(std::string_view cell, const std::string& context);

}  // namespace skyselect
