#include "skyselect/csv.hpp"

#include <cerrno>
#include <cstdlib>

#include "skyselect/common.hpp"

namespace skyselect {

CsvReader::CsvReader(const std::string& path) : path_(path), in_(path) {
  if (!in_.is_open()) throw DataError(strprintf("%s: cannot open file", path.c_str()));
}

bool CsvReader::next_row() {
  while (std::getline(in_, line_buf_)) {
    ++line_;
    if (!line_buf_.empty() && line_buf_.back() == '\r') line_buf_.pop_back();
    if (line_buf_.empty()) continue;
    fields_.clear();
    std::string_view s(line_buf_);
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || s[i] == ',') {
        fields_.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    return true;
  }
  return false;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_.is_open()) throw DataError(strprintf("%s: cannot open file for writing", path.c_str()));
  buf_.reserve(1 << 20);
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += cells[i];
  }
  buf_ += '\n';
  flush_if_large();
}

void CsvWriter::write_raw(std::string_view text) {
  buf_ += text;
  flush_if_large();
}

void CsvWriter::flush_if_large() {
  if (buf_.size() >= (1 << 20)) {
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
  }
}

void CsvWriter::close() {
  if (out_.is_open()) {
    if (!buf_.empty()) {
      out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
      buf_.clear();
    }
    out_.close();
    if (out_.fail()) throw DataError(strprintf("%s: write failed", path_.c_str()));
  }
}

CsvTable read_csv_table(const std::string& path) {
  CsvReader reader(path);
  CsvTable table;
  if (!reader.next_row()) throw DataError(strprintf("%s: empty file", path.c_str()));
  for (auto f : reader.fields()) table.header.emplace_back(trim(f));
  while (reader.next_row()) {
    std::vector<std::string> row;
    row.reserve(reader.fields().size());
    for (auto f : reader.fields()) row.emplace_back(trim(f));
    if (row.size() != table.header.size())
      throw DataError(strprintf("%s:%zu: expected %zu fields, got %zu", path.c_str(), reader.line_number(),
                                table.header.size(), row.size()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

double parse_double_cell(std::string_view cell, const std::string& context) {
  std::string_view t = trim(cell);
  if (t.empty()) throw DataError(context + ": empty numeric cell");
  std::string tmp(t);
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(tmp.c_str(), &end);
  if (end != tmp.c_str() + tmp.size() || errno == ERANGE)
    throw DataError(strprintf("%s: cannot parse '%s' as a number", context.c_str(), tmp.c_str()));
  return v;
}

long parse_long_cell(std::string_view cell, const std::string& context) {
  std::string_view t = trim(cell);
  if (t.empty()) throw DataError(context + ": empty integer cell");
  std::string tmp(t);
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(tmp.c_str(), &end, 10);
  if (end != tmp.c_str() + tmp.size() || errno == ERANGE)
    throw DataError(strprintf("%s: cannot parse '%s' as an integer", context.c_str(), tmp.c_str()));
  return v;
}

}  // namespace skyselect
