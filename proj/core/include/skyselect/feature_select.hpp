#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "skyselect/dataset.hpp"

namespace skyselect {

enum class SelectorKind { kMic, kSvmRfe, kRandomForest };

const std::array<SelectorKind, 3>& all_selector_kinds();
std::string selector_name(SelectorKind k);           // "mic", "svmrfe", "rf"
SelectorKind parse_selector(std::string_view text);  // also accepts "svm-rfe" / "svm_rfe"

// A ranking over the columns of one matrix, best first. Scores are the
// ranking criterion (mutual information, elimination position, mean impurity
// decrease); order is by descending score with ties broken by ascending
// column index.
struct RankedFeatures {
  std::string method;
  std::string tie_break = "ascending registry index";
  std::vector<size_t> order;       // column indices, best first
  std::vector<std::string> names;  // aligned with order
  std::vector<double> scores;      // aligned with order
};

// Mutual information in nats between x (equal-frequency binned into at most
// `bins` bins) and y (binned the same way), via H(X) + H(Y) - H(X,Y) on the
// empirical joint. Cut points sit at sorted_x[floor(k*n/B)], k = 1..B-1,
// deduplicated; bin(x) = number of cut points <= x.
double mutual_information_binned(const std::vector<double>& x, const std::vector<double>& y,
                                 size_t bins = 5);

RankedFeatures mic_rank(const FeatureMatrix& m);
// Repeatedly trains a linear SVM (C = 1) on the surviving standardized
// columns and drops the one with the smallest squared weight (ties drop the
// highest column index); rank is the reverse elimination order and the score
// is the 1-based elimination position.
RankedFeatures svm_rfe_rank(const FeatureMatrix& m);
RankedFeatures rf_rank(const FeatureMatrix& m, uint64_t seed, size_t n_trees = 100);
RankedFeatures rank_features(SelectorKind kind, const FeatureMatrix& m, uint64_t seed);

// floor(proportion * total), at least 1; proportion must lie in (0, 1].
size_t select_top_count(size_t total, double proportion);

// The top-k column indices of the ranking, re-sorted ascending so selected
// matrices keep registry column order.
std::vector<size_t> select_top(const RankedFeatures& ranked, size_t k);

}  // namespace skyselect
