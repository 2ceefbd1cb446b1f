#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "skyselect/classifiers.hpp"
#include "skyselect/common.hpp"
#include "train_util.hpp"

namespace skyselect {

namespace {

constexpr double kMinSplitGain = 1e-12;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct LeafState {
  int node = -1;
  std::vector<size_t> rows;
  double G = 0.0, H = 0.0;
  size_t created = 0;
  // Best candidate split for this leaf.
  double gain = -std::numeric_limits<double>::infinity();
  int feature = -1;
  double threshold = 0.0;
};

// Finds the best (gain, feature, threshold) split of the leaf under the
// min-leaf and min-hessian constraints; ties resolve to the lower feature
// index then the lower threshold.
void find_best_split(const FeatureMatrix& data, const std::vector<double>& g,
                     const std::vector<double>& h, const GbmOptions& opts, LeafState* leaf) {
  leaf->gain = -std::numeric_limits<double>::infinity();
  leaf->feature = -1;
  const size_t n = leaf->rows.size();
  if (n < 2 * opts.min_leaf) return;
  const double parent_score = leaf->G * leaf->G / leaf->H;

  std::vector<std::pair<double, size_t>> vals(n);
  for (size_t f = 0; f < data.cols(); ++f) {
    for (size_t i = 0; i < n; ++i) vals[i] = {data.at(leaf->rows[i], f), leaf->rows[i]};
    std::sort(vals.begin(), vals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double GL = 0.0, HL = 0.0;
    for (size_t i = 0; i + 1 < n; ++i) {
      GL += g[vals[i].second];
      HL += h[vals[i].second];
      if (vals[i].first == vals[i + 1].first) continue;
      const size_t left_n = i + 1, right_n = n - left_n;
      if (left_n < opts.min_leaf || right_n < opts.min_leaf) continue;
      const double GR = leaf->G - GL, HR = leaf->H - HL;
      if (HL < opts.min_hessian || HR < opts.min_hessian) continue;
      const double gain = GL * GL / HL + GR * GR / HR - parent_score;
      if (gain > leaf->gain) {
        leaf->gain = gain;
        leaf->feature = static_cast<int>(f);
        leaf->threshold = 0.5 * (vals[i].first + vals[i + 1].first);
      }
    }
  }
}

}  // namespace

std::unique_ptr<GbmModel> GbmModel::train(const FeatureMatrix& data, const GbmOptions& opts) {
  detail::require_trainable(data, "lgbm");
  if (opts.rounds == 0) throw ValidationError("lgbm: rounds must be positive");
  if (opts.learning_rate <= 0.0) throw ValidationError("lgbm: learning rate must be positive");
  if (opts.max_leaves < 2) throw ValidationError("lgbm: max_leaves must be at least 2");

  auto model = std::unique_ptr<GbmModel>(new GbmModel());
  const size_t n = data.rows();
  model->dim_ = data.cols();
  model->learning_rate_ = opts.learning_rate;

  size_t n_pos = 0;
  for (int y : data.labels) n_pos += y == 1 ? 1 : 0;
  const double prior = static_cast<double>(n_pos) / static_cast<double>(n);
  model->base_ = std::log(prior / (1.0 - prior));

  std::vector<double> F(n, model->base_), g(n), h(n);
  for (size_t round = 0; round < opts.rounds; ++round) {
    for (size_t i = 0; i < n; ++i) {
      const double p = sigmoid(F[i]);
      g[i] = p - static_cast<double>(data.labels[i]);
      h[i] = std::max(p * (1.0 - p), 1e-16);
    }

    std::vector<GbmNode> nodes;
    std::vector<LeafState> leaves;
    size_t created = 0;

    auto new_leaf = [&](std::vector<size_t> rows) {
      GbmNode node;
      nodes.push_back(node);
      LeafState leaf;
      leaf.node = static_cast<int>(nodes.size() - 1);
      leaf.rows = std::move(rows);
      for (size_t r : leaf.rows) {
        leaf.G += g[r];
        leaf.H += h[r];
      }
      leaf.created = created++;
      find_best_split(data, g, h, opts, &leaf);
      leaves.push_back(std::move(leaf));
    };

    std::vector<size_t> all(n);
    for (size_t i = 0; i < n; ++i) all[i] = i;
    new_leaf(std::move(all));

    while (leaves.size() < opts.max_leaves) {
      size_t best = leaves.size();
      for (size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i].feature < 0 || leaves[i].gain <= kMinSplitGain) continue;
        if (best == leaves.size() || leaves[i].gain > leaves[best].gain ||
            (leaves[i].gain == leaves[best].gain && leaves[i].created < leaves[best].created))
          best = i;
      }
      if (best == leaves.size()) break;

      LeafState parent = std::move(leaves[best]);
      leaves.erase(leaves.begin() + static_cast<long>(best));
      std::vector<size_t> left, right;
      for (size_t r : parent.rows)
        (data.at(r, static_cast<size_t>(parent.feature)) <= parent.threshold ? left : right).push_back(r);
      const int parent_node = parent.node;
      nodes[static_cast<size_t>(parent_node)].feature = parent.feature;
      nodes[static_cast<size_t>(parent_node)].threshold = parent.threshold;
      new_leaf(std::move(left));
      nodes[static_cast<size_t>(parent_node)].left = static_cast<int>(nodes.size() - 1);
      new_leaf(std::move(right));
      nodes[static_cast<size_t>(parent_node)].right = static_cast<int>(nodes.size() - 1);
    }

    for (const LeafState& leaf : leaves) {
      const double value = -leaf.G / leaf.H;
      nodes[static_cast<size_t>(leaf.node)].value = value;
      for (size_t r : leaf.rows) F[r] += opts.learning_rate * value;
    }
    model->trees_.push_back(std::move(nodes));
  }
  return model;
}

double GbmModel::score(const std::vector<double>& row) const {
  if (row.size() != dim_)
    throw ValidationError(strprintf("lgbm: expected %zu features, got %zu", dim_, row.size()));
  double F = base_;
  for (const auto& tree : trees_) {
    int at = 0;
    while (tree[static_cast<size_t>(at)].feature >= 0) {
      const GbmNode& node = tree[static_cast<size_t>(at)];
      at = row[static_cast<size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    F += learning_rate_ * tree[static_cast<size_t>(at)].value;
  }
  return sigmoid(F);
}

void GbmModel::save(std::ostream& out) const {
  out << "dim " << dim_ << "\n";
  out << "base " << strprintf("%.17g", base_) << "\n";
  out << "learning_rate " << strprintf("%.17g", learning_rate_) << "\n";
  out << "trees " << trees_.size() << "\n";
  for (const auto& tree : trees_) {
    out << "tree " << tree.size() << "\n";
    for (const GbmNode& node : tree)
      out << node.feature << ' ' << strprintf("%.17g", node.threshold) << ' ' << node.left << ' '
          << node.right << ' ' << strprintf("%.17g", node.value) << "\n";
  }
}

}  // namespace skyselect
