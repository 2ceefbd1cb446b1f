#include <algorithm>
#include <cmath>
#include <ostream>

#include "skyselect/classifiers.hpp"
#include "skyselect/common.hpp"
#include "train_util.hpp"

namespace skyselect {

std::unique_ptr<KnnModel> KnnModel::train(const FeatureMatrix& data, const KnnOptions& opts) {
  detail::require_trainable(data, "knn");
  if (opts.k == 0) throw ValidationError("knn: k must be positive");
  auto model = std::unique_ptr<KnnModel>(new KnnModel());
  model->dim_ = data.cols();
  model->k_ = std::min(opts.k, data.rows());
  model->points_ = detail::fit_standardized(model->scaler_, data);
  model->labels_ = data.labels;
  return model;
}

double KnnModel::score(const std::vector<double>& row) const {
  const std::vector<double> x = scaler_.apply(row);
  const size_t n = labels_.size();
  // (distance^2, training index); ties on distance resolve to the earlier row.
  std::vector<std::pair<double, size_t>> order(n);
  for (size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (size_t c = 0; c < dim_; ++c) {
      const double d = points_[i * dim_ + c] - x[c];
      sq += d * d;
    }
    order[i] = {sq, i};
  }
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(k_), order.end());
  size_t positives = 0;
  for (size_t r = 0; r < k_; ++r) positives += labels_[order[r].second] == 1 ? 1 : 0;
  return static_cast<double>(positives) / static_cast<double>(k_);
}

void KnnModel::save(std::ostream& out) const {
  out << "k " << k_ << "\n";
  out << "dim " << dim_ << "\n";
  out << "mean";
  for (double v : scaler_.mean) out << ' ' << strprintf("%.17g", v);
  out << "\nscale";
  for (double v : scaler_.scale) out << ' ' << strprintf("%.17g", v);
  out << "\nn " << labels_.size() << "\n";
  for (size_t i = 0; i < labels_.size(); ++i) {
    out << labels_[i];
    for (size_t c = 0; c < dim_; ++c) out << ' ' << strprintf("%.17g", points_[i * dim_ + c]);
    out << "\n";
  }
}

}  // namespace skyselect
