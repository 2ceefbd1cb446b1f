#pragma once

// Internal CART builder shared by the decision tree model and the random
// forest importance ranking.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "skyselect/classifiers.hpp"
#include "skyselect/dataset.hpp"
#include "skyselect/rng.hpp"

namespace skyselect {
namespace detail {

struct TreeBuildOptions {
  size_t min_samples_split = 2;
  size_t min_samples_leaf = 1;
  size_t max_features = 0;  // 0 means consider every column
  Rng* rng = nullptr;       // required when max_features is a strict subset
};

struct BuiltTree {
  std::vector<TreeNode> nodes;
  std::vector<double> importance;  // per column, weighted impurity decrease
};

inline double gini_of(size_t n, size_t n_pos) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(n_pos) / static_cast<double>(n);
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

// Builds a binary Gini tree over data rows `rows` (indices may repeat, as in
// a bootstrap sample). Splits are searched at midpoints between adjacent
// distinct values; ties on impurity decrease resolve to the lower feature
// index, then the lower threshold. Zero-decrease splits are accepted so
// mixed nodes keep splitting while any separating threshold exists.
inline BuiltTree build_cart(const FeatureMatrix& data, const std::vector<size_t>& rows,
                            const TreeBuildOptions& opts) {
  const size_t d = data.cols();
  BuiltTree tree;
  tree.importance.assign(d, 0.0);
  const double total_weight = static_cast<double>(rows.size());

  struct Frame {
    std::vector<size_t> idx;
    int node = -1;
  };
  std::vector<Frame> stack;

  auto make_node = [&](const std::vector<size_t>& idx) {
    TreeNode node;
    node.n = idx.size();
    node.n_pos = 0;
    for (size_t r : idx) node.n_pos += data.labels[r] == 1 ? 1 : 0;
    node.gini = gini_of(node.n, node.n_pos);
    node.value = node.n > 0 ? static_cast<double>(node.n_pos) / static_cast<double>(node.n) : 0.0;
    tree.nodes.push_back(node);
    return static_cast<int>(tree.nodes.size() - 1);
  };

  stack.push_back({rows, make_node(rows)});

  std::vector<size_t> feature_pool(d);
  for (size_t j = 0; j < d; ++j) feature_pool[j] = j;

  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    TreeNode& node = tree.nodes[static_cast<size_t>(frame.node)];
    if (node.n_pos == 0 || node.n_pos == node.n) continue;          // pure
    if (node.n < opts.min_samples_split) continue;                   // too small
    if (node.n < 2 * opts.min_samples_leaf) continue;

    // Candidate features for this node.
    std::vector<size_t> features;
    if (opts.max_features == 0 || opts.max_features >= d) {
      features = feature_pool;
    } else {
      std::vector<size_t> pool = feature_pool;
      for (size_t pick = 0; pick < opts.max_features; ++pick) {
        const size_t swap_at = pick + static_cast<size_t>(opts.rng->below(pool.size() - pick));
        std::swap(pool[pick], pool[swap_at]);
      }
      features.assign(pool.begin(), pool.begin() + static_cast<long>(opts.max_features));
      std::sort(features.begin(), features.end());
    }

    int best_feature = -1;
    double best_threshold = 0.0, best_decrease = -1.0;
    size_t best_left_n = 0;

    std::vector<std::pair<double, int>> vals(frame.idx.size());
    for (size_t f : features) {
      for (size_t i = 0; i < frame.idx.size(); ++i)
        vals[i] = {data.at(frame.idx[i], f), data.labels[frame.idx[i]]};
      std::sort(vals.begin(), vals.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      size_t left_n = 0, left_pos = 0;
      for (size_t i = 0; i + 1 < vals.size(); ++i) {
        ++left_n;
        left_pos += vals[i].second == 1 ? 1 : 0;
        if (vals[i].first == vals[i + 1].first) continue;  // no cut inside a run
        if (left_n < opts.min_samples_leaf || node.n - left_n < opts.min_samples_leaf) continue;
        const size_t right_n = node.n - left_n, right_pos = node.n_pos - left_pos;
        const double wl = static_cast<double>(left_n) / static_cast<double>(node.n);
        const double wr = static_cast<double>(right_n) / static_cast<double>(node.n);
        const double decrease = node.gini - wl * gini_of(left_n, left_pos) - wr * gini_of(right_n, right_pos);
        if (decrease > best_decrease) {
          best_decrease = decrease;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
          best_left_n = left_n;
        }
      }
    }
    if (best_feature < 0) continue;  // every candidate feature constant here

    std::vector<size_t> left, right;
    left.reserve(best_left_n);
    right.reserve(node.n - best_left_n);
    for (size_t r : frame.idx)
      (data.at(r, static_cast<size_t>(best_feature)) <= best_threshold ? left : right).push_back(r);

    node.feature = best_feature;
    node.threshold = best_threshold;
    tree.importance[static_cast<size_t>(best_feature)] +=
        (static_cast<double>(node.n) / total_weight) * best_decrease;

    const int node_index = frame.node;
    const int left_index = make_node(left);    // may reallocate nodes
    const int right_index = make_node(right);
    tree.nodes[static_cast<size_t>(node_index)].left = left_index;
    tree.nodes[static_cast<size_t>(node_index)].right = right_index;
    stack.push_back({std::move(right), right_index});
    stack.push_back({std::move(left), left_index});
  }
  return tree;
}

inline double tree_predict(const std::vector<TreeNode>& nodes, const std::vector<double>& row) {
  int at = 0;
  while (nodes[static_cast<size_t>(at)].feature >= 0) {
    const TreeNode& node = nodes[static_cast<size_t>(at)];
    at = row[static_cast<size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes[static_cast<size_t>(at)].value;
}

}  // namespace detail
}  // namespace skyselect
