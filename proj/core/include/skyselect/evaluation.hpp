#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "skyselect/classifiers.hpp"
#include "skyselect/dataset.hpp"
#include "skyselect/feature_select.hpp"

namespace skyselect {

struct ConfusionMatrix {
  size_t tp = 0, fp = 0, tn = 0, fn = 0;
  size_t total() const { return tp + fp + tn + fn; }
};

// The five headline metrics. Zero-denominator precision/recall (and an F1
// built on them) are reported as 0 with their defined-flag cleared.
// `auc_defined` is cleared only by loocv() when fold exclusions leave the
// pooled set single-class; the standalone auc functions throw instead.
struct Metrics {
  double acc = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0, auc = 0.0;
  bool precision_defined = true, recall_defined = true, f1_defined = true, auc_defined = true;
};

struct PooledPrediction {
  std::string id;
  int label = 0;
  double score = 0.0;
  int predicted = 0;
};

struct RocPoint {
  double fpr = 0.0, tpr = 0.0;
};

// Pairwise AUC: over all (positive, negative) pairs, 1 for a higher positive
// score, 0.5 for a tie. Throws ValidationError when a class is missing.
double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels);

// ROC polyline with one point per distinct score threshold (plus the (0,0)
// start), sorted by ascending fpr. Its trapezoid area equals pairwise_auc.
std::vector<RocPoint> roc_points(const std::vector<double>& scores, const std::vector<int>& labels);
double trapezoid_area(const std::vector<RocPoint>& points);

Metrics metrics_from_cm(const ConfusionMatrix& cm);  // auc left at 0; flags set
Metrics compute_metrics(const ConfusionMatrix& cm, const std::vector<double>& scores,
                        const std::vector<int>& labels);

struct EvalReport {
  ConfusionMatrix cm;
  Metrics metrics;
  std::vector<PooledPrediction> pooled;  // participant order, excluded folds absent
  std::vector<RocPoint> roc;
  std::vector<size_t> excluded_folds;  // held-out rows whose training fold lost a class
};

// Test instrumentation: called once per fold with the training matrix (after
// the held-out row is removed) and the selected column indices.
class FoldObserver {
 public:
  virtual ~FoldObserver() = default;
  virtual void on_fold(size_t held_out, const FeatureMatrix& training,
                       const std::vector<size_t>& selected_columns) = 0;
};

struct LoocvOptions {
  SelectorKind selector = SelectorKind::kMic;
  double proportion = 0.65;
  ModelKind model = ModelKind::kSvm;
  // Leak-compat protocol: rank features once on the full matrix instead of
  // inside each fold (standardization and training stay fold-local).
  bool leak_compat = false;
  uint64_t seed = 7;
  size_t jobs = 1;
  TrainOptions train;
  FoldObserver* observer = nullptr;
  // Tests may swap the model for a custom trainer (e.g. majority-vote).
  std::function<std::unique_ptr<Model>(const FeatureMatrix&)> trainer_override;
};

// Per-fold feature rankings, reusable across proportions and models.
struct FoldRankings {
  bool leak_compat = false;
  RankedFeatures global;                 // set when leak_compat
  std::vector<RankedFeatures> per_fold;  // indexed by held-out row otherwise
};

FoldRankings compute_fold_rankings(const FeatureMatrix& features, SelectorKind selector,
                                   uint64_t seed, size_t jobs, bool leak_compat);

// Leave-one-out evaluation: per fold, rank (unless precomputed), select the
// top proportion, train, and score the held-out row; pool the scores and
// derive every metric from the pooled list.
EvalReport loocv(const FeatureMatrix& features, const LoocvOptions& opts);
EvalReport loocv_with_rankings(const FeatureMatrix& features, const FoldRankings& rankings,
                               const LoocvOptions& opts);

}  // namespace skyselect
