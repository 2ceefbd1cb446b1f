#include <numeric>
#include <ostream>

#include "skyselect/classifiers.hpp"
#include "skyselect/common.hpp"
#include "train_util.hpp"
#include "tree_builder.hpp"

namespace skyselect {

std::unique_ptr<DtreeModel> DtreeModel::train(const FeatureMatrix& data, const DtreeOptions& opts) {
  detail::require_trainable(data, "dtree");
  if (opts.min_samples_split < 2) throw ValidationError("dtree: min_samples_split must be at least 2");
  if (opts.min_samples_leaf < 1) throw ValidationError("dtree: min_samples_leaf must be at least 1");
  auto model = std::unique_ptr<DtreeModel>(new DtreeModel());
  model->dim_ = data.cols();

  std::vector<size_t> rows(data.rows());
  std::iota(rows.begin(), rows.end(), size_t{0});
  detail::TreeBuildOptions build;
  build.min_samples_split = opts.min_samples_split;
  build.min_samples_leaf = opts.min_samples_leaf;
  detail::BuiltTree built = detail::build_cart(data, rows, build);
  model->nodes_ = std::move(built.nodes);
  model->importance_raw_ = std::move(built.importance);
  return model;
}

double DtreeModel::score(const std::vector<double>& row) const {
  if (row.size() != dim_)
    throw ValidationError(strprintf("dtree: expected %zu features, got %zu", dim_, row.size()));
  return detail::tree_predict(nodes_, row);
}

std::vector<double> DtreeModel::importances() const {
  std::vector<double> out = importance_raw_;
  double total = 0.0;
  for (double v : out) total += v;
  if (total > 0.0)
    for (double& v : out) v /= total;
  return out;
}

void DtreeModel::save(std::ostream& out) const {
  out << "dim " << dim_ << "\n";
  out << "nodes " << nodes_.size() << "\n";
  for (const TreeNode& node : nodes_) {
    out << node.feature << ' ' << strprintf("%.17g", node.threshold) << ' ' << node.left << ' '
        << node.right << ' ' << node.n << ' ' << node.n_pos << ' ' << strprintf("%.17g", node.gini)
        << ' ' << strprintf("%.17g", node.value) << "\n";
  }
  out << "importance";
  for (double v : importance_raw_) out << ' ' << strprintf("%.17g", v);
  out << "\n";
}

}  // namespace skyselect
