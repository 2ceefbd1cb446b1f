#pragma once

// Internal helpers shared by the classifier trainers.

#include <cmath>
#include <vector>

#include "skyselect/classifiers.hpp"
#include "skyselect/common.hpp"
#include "skyselect/dataset.hpp"

namespace skyselect {
namespace detail {

inline void require_trainable(const FeatureMatrix& data, const char* what) {
  if (data.rows() == 0 || data.cols() == 0)
    throw ValidationError(strprintf("%s: empty training set", what));
  if (!data.has_both_classes())
    throw ValidationError(strprintf("%s: training set must contain both classes", what));
  for (double v : data.values)
    if (!std::isfinite(v))
      throw ValidationError(strprintf("%s: non-finite feature value (impute first)", what));
}

// Fits the scaler on the matrix and returns the standardized rows, flattened
// row-major.
inline std::vector<double> fit_standardized(Standardizer& scaler, const FeatureMatrix& data) {
  scaler.fit(data);
  const size_t n = data.rows(), d = data.cols();
  std::vector<double> out(n * d);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < d; ++j)
      out[i * d + j] = (data.at(i, j) - scaler.mean[j]) / scaler.scale[j];
  return out;
}

}  // namespace detail
}  // namespace skyselect
