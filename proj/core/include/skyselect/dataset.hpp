#pragma once

#include <string>
#include <vector>

#include "skyselect/registry.hpp"

namespace skyselect {

// Row-major participants x features table with labels. Missing values are
// NaN until impute_missing() replaces them with per-column means.
struct FeatureMatrix {
  std::vector<std::string> ids;      // one per row
  std::vector<int> labels;           // 0/1, one per row
  std::vector<std::string> columns;  // feature names, canonical order
  std::vector<double> values;        // rows() * cols()

  size_t rows() const { return labels.size(); }
  size_t cols() const { return columns.size(); }
  double at(size_t r, size_t c) const { return values[r * columns.size() + c]; }
  double& at(size_t r, size_t c) { return values[r * columns.size() + c]; }

  size_t column_index(std::string_view name) const;  // throws if absent
  std::vector<double> column(size_t c) const;

  FeatureMatrix select_columns(const std::vector<size_t>& idx) const;
  FeatureMatrix select_columns_by_name(const std::vector<std::string>& names) const;
  FeatureMatrix select_rows(const std::vector<size_t>& rows) const;

  // Both labels present?
  bool has_both_classes() const;
};

// Builds a matrix whose columns are the registry subset for `combo`;
// feature_rows are full 63-wide registry-ordered vectors.
FeatureMatrix assemble_matrix(const std::vector<std::string>& ids, const std::vector<int>& labels,
                              const std::vector<std::vector<double>>& feature_rows, DatasetCombo combo);

// Restricts a matrix (typically the full 63-column table) to the columns of
// the given combo, keeping registry order.
FeatureMatrix matrix_for_combo(const FeatureMatrix& full, DatasetCombo combo);

// Replaces NaNs by the mean of the column's present values; returns how many
// cells were imputed. A column with no present values is an error.
size_t impute_missing(FeatureMatrix& m);

// features.csv: header "participant_id,label,<feature names...>", numeric
// payload at 9 significant digits.
void write_features_csv(const std::string& path, const FeatureMatrix& m);
FeatureMatrix read_features_csv(const std::string& path);

}  // namespace skyselect
