#include <algorithm>
#include <cmath>
#include <numeric>

#include "skyselect/common.hpp"
#include "skyselect/evaluation.hpp"
#include "skyselect/parallel.hpp"
#include "skyselect/rng.hpp"

namespace skyselect {

namespace {

void split_by_class(const std::vector<double>& scores, const std::vector<int>& labels,
                    std::vector<double>* pos, std::vector<double>* neg) {
  if (scores.size() != labels.size() || scores.empty())
    throw ValidationError("auc: scores and labels must be non-empty and aligned");
  for (size_t i = 0; i < scores.size(); ++i)
    (labels[i] == 1 ? pos : neg)->push_back(scores[i]);
  if (pos->empty() || neg->empty()) throw ValidationError("auc: both classes required");
}

}  // namespace

double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  // The rank statistic (tied pairs at half weight) equals the area under the
  // tie-grouped ROC polygon, so both public views share one arithmetic path
  // and agree to the last bit on any input.
  return trapezoid_area(roc_points(scores, labels));
}

std::vector<RocPoint> roc_points(const std::vector<double>& scores, const std::vector<int>& labels) {
  std::vector<double> pos, neg;
  split_by_class(scores, labels, &pos, &neg);
  const double np = static_cast<double>(pos.size()), nn = static_cast<double>(neg.size());

  std::vector<std::pair<double, int>> ranked(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) ranked[i] = {scores[i], labels[i]};
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;  // irrelevant to the curve; fixed for determinism
  });

  std::vector<RocPoint> points;
  points.push_back({0.0, 0.0});
  size_t tp = 0, fp = 0, i = 0;
  while (i < ranked.size()) {
    size_t j = i;  // group of equal scores gives one point
    while (j < ranked.size() && ranked[j].first == ranked[i].first) {
      tp += ranked[j].second == 1 ? 1 : 0;
      fp += ranked[j].second == 1 ? 0 : 1;
      ++j;
    }
    points.push_back({static_cast<double>(fp) / nn, static_cast<double>(tp) / np});
    i = j;
  }
  return points;
}

double trapezoid_area(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (size_t i = 1; i < points.size(); ++i)
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) * 0.5;
  return area;
}

Metrics metrics_from_cm(const ConfusionMatrix& cm) {
  Metrics m;
  const size_t total = cm.total();
  m.acc = total > 0 ? static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total) : 0.0;
  if (cm.tp + cm.fp > 0) {
    m.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  } else {
    m.precision_defined = false;
  }
  if (cm.tp + cm.fn > 0) {
    m.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  } else {
    m.recall_defined = false;
  }
  if (m.precision_defined && m.recall_defined && m.precision + m.recall > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  } else {
    m.f1_defined = false;
  }
  return m;
}

Metrics compute_metrics(const ConfusionMatrix& cm, const std::vector<double>& scores,
                        const std::vector<int>& labels) {
  Metrics m = metrics_from_cm(cm);
  m.auc = pairwise_auc(scores, labels);
  return m;
}

FoldRankings compute_fold_rankings(const FeatureMatrix& features, SelectorKind selector,
                                   uint64_t seed, size_t jobs, bool leak_compat) {
  FoldRankings out;
  out.leak_compat = leak_compat;
  if (leak_compat) {
    out.global = rank_features(selector, features, derive_seed(seed, "rank-global", 0));
    return out;
  }
  const size_t n = features.rows();
  out.per_fold.resize(n);
  std::vector<std::string> errors(n);
  parallel_for(n, jobs, [&](size_t i) {
    try {
      std::vector<size_t> keep;
      keep.reserve(n - 1);
      for (size_t r = 0; r < n; ++r)
        if (r != i) keep.push_back(r);
      const FeatureMatrix training = features.select_rows(keep);
      if (!training.has_both_classes()) return;  // the fold is excluded later
      out.per_fold[i] = rank_features(selector, training, derive_seed(seed, "rank-fold", i));
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (size_t i = 0; i < n; ++i)
    if (!errors[i].empty()) throw ValidationError(strprintf("fold %zu: %s", i, errors[i].c_str()));
  return out;
}

EvalReport loocv(const FeatureMatrix& features, const LoocvOptions& opts) {
  const FoldRankings rankings =
      compute_fold_rankings(features, opts.selector, opts.seed, opts.jobs, opts.leak_compat);
  return loocv_with_rankings(features, rankings, opts);
}

EvalReport loocv_with_rankings(const FeatureMatrix& features, const FoldRankings& rankings,
                               const LoocvOptions& opts) {
  const size_t n = features.rows();
  if (n < 3) throw ValidationError("loocv: need at least 3 rows");
  if (!features.has_both_classes()) throw ValidationError("loocv: both classes required");
  for (double v : features.values)
    if (!std::isfinite(v)) throw ValidationError("loocv: non-finite feature values (impute first)");
  if (!rankings.leak_compat && rankings.per_fold.size() != n)
    throw ValidationError("loocv: fold rankings do not match the matrix");

  struct FoldOutcome {
    bool excluded = false;
    double score = 0.0;
    int predicted = 0;
  };
  std::vector<FoldOutcome> outcomes(n);
  std::vector<std::string> errors(n);

  parallel_for(n, opts.jobs, [&](size_t i) {
    try {
      std::vector<size_t> keep;
      keep.reserve(n - 1);
      for (size_t r = 0; r < n; ++r)
        if (r != i) keep.push_back(r);
      FeatureMatrix training = features.select_rows(keep);
      if (!training.has_both_classes()) {
        outcomes[i].excluded = true;
        return;
      }
      const RankedFeatures& ranking = rankings.leak_compat ? rankings.global : rankings.per_fold[i];
      const size_t k = select_top_count(features.cols(), opts.proportion);
      const std::vector<size_t> selected = select_top(ranking, k);
      const FeatureMatrix train_sel = training.select_columns(selected);
      if (opts.observer) opts.observer->on_fold(i, train_sel, selected);

      std::unique_ptr<Model> model = opts.trainer_override
                                         ? opts.trainer_override(train_sel)
                                         : train_model(opts.model, train_sel, opts.train);
      std::vector<double> row(selected.size());
      for (size_t c = 0; c < selected.size(); ++c) row[c] = features.at(i, selected[c]);
      outcomes[i].score = model->score(row);
      outcomes[i].predicted = model->predict(row);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (size_t i = 0; i < n; ++i)
    if (!errors[i].empty()) throw ValidationError(strprintf("fold %zu: %s", i, errors[i].c_str()));

  EvalReport report;
  std::vector<double> scores;
  std::vector<int> labels;
  for (size_t i = 0; i < n; ++i) {
    if (outcomes[i].excluded) {
      report.excluded_folds.push_back(i);
      continue;
    }
    PooledPrediction p;
    p.id = features.ids[i];
    p.label = features.labels[i];
    p.score = outcomes[i].score;
    p.predicted = outcomes[i].predicted;
    report.pooled.push_back(p);
    scores.push_back(p.score);
    labels.push_back(p.label);
    if (p.label == 1 && p.predicted == 1) ++report.cm.tp;
    else if (p.label == 1) ++report.cm.fn;
    else if (p.predicted == 1) ++report.cm.fp;
    else ++report.cm.tn;
  }
  if (report.pooled.empty()) throw ValidationError("loocv: every fold was excluded");
  bool has_pos = false, has_neg = false;
  for (int lab : labels) (lab == 1 ? has_pos : has_neg) = true;
  if (has_pos && has_neg) {
    report.metrics = compute_metrics(report.cm, scores, labels);
    report.roc = roc_points(scores, labels);
  } else {
    report.metrics = metrics_from_cm(report.cm);
    report.metrics.auc_defined = false;
  }
  return report;
}

}  // namespace skyselect
