#include "skyselect/dataset.hpp"

#include <cmath>

#include "skyselect/common.hpp"
#include "skyselect/csv.hpp"

namespace skyselect {

size_t FeatureMatrix::column_index(std::string_view name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ValidationError(strprintf("matrix has no column '%.*s'", static_cast<int>(name.size()), name.data()));
}

std::vector<double> FeatureMatrix::column(size_t c) const {
  std::vector<double> out(rows());
  for (size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
  return out;
}

FeatureMatrix FeatureMatrix::select_columns(const std::vector<size_t>& idx) const {
  FeatureMatrix out;
  out.ids = ids;
  out.labels = labels;
  out.columns.reserve(idx.size());
  for (size_t c : idx) {
    if (c >= cols()) throw ValidationError("column index out of range");
    out.columns.push_back(columns[c]);
  }
  out.values.resize(rows() * idx.size());
  for (size_t r = 0; r < rows(); ++r)
    for (size_t j = 0; j < idx.size(); ++j) out.values[r * idx.size() + j] = at(r, idx[j]);
  return out;
}

FeatureMatrix FeatureMatrix::select_columns_by_name(const std::vector<std::string>& names) const {
  std::vector<size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(column_index(n));
  return select_columns(idx);
}

FeatureMatrix FeatureMatrix::select_rows(const std::vector<size_t>& rows_idx) const {
  FeatureMatrix out;
  out.columns = columns;
  out.ids.reserve(rows_idx.size());
  out.labels.reserve(rows_idx.size());
  out.values.reserve(rows_idx.size() * cols());
  for (size_t r : rows_idx) {
    if (r >= rows()) throw ValidationError("row index out of range");
    out.ids.push_back(ids.empty() ? std::string() : ids[r]);
    out.labels.push_back(labels[r]);
    for (size_t c = 0; c < cols(); ++c) out.values.push_back(at(r, c));
  }
  if (ids.empty()) out.ids.clear();
  return out;
}

bool FeatureMatrix::has_both_classes() const {
  bool pos = false, neg = false;
  for (int l : labels) (l == 1 ? pos : neg) = true;
  return pos && neg;
}

FeatureMatrix assemble_matrix(const std::vector<std::string>& ids, const std::vector<int>& labels,
                              const std::vector<std::vector<double>>& feature_rows, DatasetCombo combo) {
  const auto& reg = FeatureRegistry::instance();
  if (ids.size() != labels.size() || ids.size() != feature_rows.size())
    throw ValidationError("assemble_matrix: ids, labels and feature rows must align");
  auto idx = reg.indices(combo);
  FeatureMatrix m;
  m.ids = ids;
  m.labels = labels;
  m.columns = reg.names(combo);
  m.values.reserve(ids.size() * idx.size());
  for (size_t r = 0; r < feature_rows.size(); ++r) {
    if (feature_rows[r].size() != reg.size())
      throw ValidationError(strprintf("feature row %zu has %zu entries, registry has %zu", r, feature_rows[r].size(),
                                      reg.size()));
    for (size_t c : idx) m.values.push_back(feature_rows[r][c]);
  }
  for (int l : labels)
    if (l != 0 && l != 1) throw ValidationError("labels must be 0 or 1");
  return m;
}

FeatureMatrix matrix_for_combo(const FeatureMatrix& full, DatasetCombo combo) {
  return full.select_columns_by_name(FeatureRegistry::instance().names(combo));
}

size_t impute_missing(FeatureMatrix& m) {
  size_t imputed = 0;
  for (size_t c = 0; c < m.cols(); ++c) {
    double sum = 0.0;
    size_t present = 0;
    for (size_t r = 0; r < m.rows(); ++r) {
      double v = m.at(r, c);
      if (!std::isnan(v)) {
        sum += v;
        ++present;
      }
    }
    if (present == m.rows()) continue;
    if (present == 0)
      throw DataError(strprintf("feature '%s' is missing for every participant", m.columns[c].c_str()));
    double mean = sum / static_cast<double>(present);
    for (size_t r = 0; r < m.rows(); ++r) {
      if (std::isnan(m.at(r, c))) {
        m.at(r, c) = mean;
        ++imputed;
      }
    }
  }
  return imputed;
}

void write_features_csv(const std::string& path, const FeatureMatrix& m) {
  CsvWriter w(path);
  std::string header = "participant_id,label";
  for (const auto& c : m.columns) {
    header += ',';
    header += c;
  }
  header += '\n';
  w.write_raw(header);
  std::string line;
  for (size_t r = 0; r < m.rows(); ++r) {
    line.clear();
    line += m.ids.empty() ? strprintf("row%zu", r) : m.ids[r];
    line += ',';
    line += std::to_string(m.labels[r]);
    for (size_t c = 0; c < m.cols(); ++c) {
      line += ',';
      double v = m.at(r, c);
      line += std::isnan(v) ? "" : fmt9(v);
    }
    line += '\n';
    w.write_raw(line);
  }
  w.close();
}

FeatureMatrix read_features_csv(const std::string& path) {
  CsvTable t = read_csv_table(path);
  if (t.header.size() < 3 || t.header[0] != "participant_id" || t.header[1] != "label")
    throw DataError(strprintf("%s:1: expected header starting with participant_id,label", path.c_str()));
  FeatureMatrix m;
  m.columns.assign(t.header.begin() + 2, t.header.end());
  for (size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    m.ids.push_back(row[0]);
    long label = parse_long_cell(row[1], strprintf("%s:%zu: column 'label'", path.c_str(), r + 2));
    if (label != 0 && label != 1)
      throw DataError(strprintf("%s:%zu: label must be 0 or 1, got %ld", path.c_str(), r + 2, label));
    m.labels.push_back(static_cast<int>(label));
    for (size_t c = 2; c < row.size(); ++c) {
      if (row[c].empty()) {
        m.values.push_back(std::nan(""));
      } else {
        m.values.push_back(
            parse_double_cell(row[c], strprintf("%s:%zu: column '%s'", path.c_str(), r + 2, t.header[c].c_str())));
      }
    }
  }
  return m;
}

}  // namespace skyselect
