#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "skyselect/classifiers.hpp"
#include "skyselect/common.hpp"
#include "skyselect/feature_select.hpp"
#include "skyselect/rng.hpp"
#include "train_util.hpp"
#include "tree_builder.hpp"

namespace skyselect {

const std::array<SelectorKind, 3>& all_selector_kinds() {
  static const std::array<SelectorKind, 3> kinds = {SelectorKind::kMic, SelectorKind::kSvmRfe,
                                                    SelectorKind::kRandomForest};
  return kinds;
}

std::string selector_name(SelectorKind k) {
  switch (k) {
    case SelectorKind::kMic: return "mic";
    case SelectorKind::kSvmRfe: return "svmrfe";
    case SelectorKind::kRandomForest: return "rf";
  }
  return "unknown";
}

SelectorKind parse_selector(std::string_view text) {
  const std::string t = lower(trim(text));
  if (t == "mic") return SelectorKind::kMic;
  if (t == "svmrfe" || t == "svm-rfe" || t == "svm_rfe") return SelectorKind::kSvmRfe;
  if (t == "rf") return SelectorKind::kRandomForest;
  throw ValidationError(strprintf("unknown selector '%s' (expected mic, svmrfe or rf)", t.c_str()));
}

namespace {

// Equal-frequency bin assignment; returns bin ids and the bin count.
std::pair<std::vector<int>, size_t> bin_column(const std::vector<double>& v, size_t bins) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const size_t distinct =
      static_cast<size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  const size_t B = std::min(bins, distinct);
  std::vector<double> cuts;
  if (B > 1) {
    sorted = v;  // unique() above clobbered the tail
    std::sort(sorted.begin(), sorted.end());
    for (size_t k = 1; k < B; ++k) {
      const double cut = sorted[k * v.size() / B];
      if (cuts.empty() || cut != cuts.back()) cuts.push_back(cut);
    }
  }
  std::vector<int> ids(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    int id = 0;
    for (double cut : cuts)
      if (cut <= v[i]) ++id;
    ids[i] = id;
  }
  return {std::move(ids), cuts.size() + 1};
}

double entropy_from_counts(const std::vector<size_t>& counts, size_t n) {
  double h = 0.0;
  for (size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

// Sorts (score, index) descending by score, ascending index on ties, and
// fills the ranking fields.
void fill_ranking(RankedFeatures* out, const FeatureMatrix& m, const std::vector<double>& scores) {
  const size_t d = m.cols();
  std::vector<size_t> order(d);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  out->order = order;
  out->names.resize(d);
  out->scores.resize(d);
  for (size_t r = 0; r < d; ++r) {
    out->names[r] = m.columns[order[r]];
    out->scores[r] = scores[order[r]];
  }
}

void require_rankable(const FeatureMatrix& m, const char* what) {
  if (m.rows() < 2) throw ValidationError(strprintf("%s: need at least 2 rows", what));
  if (!m.has_both_classes()) throw ValidationError(strprintf("%s: both classes required", what));
  if (m.cols() == 0) throw ValidationError(strprintf("%s: no feature columns", what));
}

}  // namespace

double mutual_information_binned(const std::vector<double>& x, const std::vector<double>& y,
                                 size_t bins) {
  if (x.size() != y.size() || x.empty())
    throw ValidationError("mutual information: series must be non-empty and equally sized");
  const auto [bx, nbx] = bin_column(x, bins);
  const auto [by, nby] = bin_column(y, bins);
  const size_t n = x.size();
  std::vector<size_t> cx(nbx, 0), cy(nby, 0), cxy(nbx * nby, 0);
  for (size_t i = 0; i < n; ++i) {
    ++cx[static_cast<size_t>(bx[i])];
    ++cy[static_cast<size_t>(by[i])];
    ++cxy[static_cast<size_t>(bx[i]) * nby + static_cast<size_t>(by[i])];
  }
  return entropy_from_counts(cx, n) + entropy_from_counts(cy, n) - entropy_from_counts(cxy, n);
}

RankedFeatures mic_rank(const FeatureMatrix& m) {
  require_rankable(m, "mic");
  std::vector<double> labels(m.rows());
  for (size_t i = 0; i < m.rows(); ++i) labels[i] = static_cast<double>(m.labels[i]);
  std::vector<double> scores(m.cols());
  for (size_t j = 0; j < m.cols(); ++j) scores[j] = mutual_information_binned(m.column(j), labels);
  RankedFeatures out;
  out.method = selector_name(SelectorKind::kMic);
  fill_ranking(&out, m, scores);
  return out;
}

RankedFeatures svm_rfe_rank(const FeatureMatrix& m) {
  require_rankable(m, "svmrfe");
  const size_t d = m.cols();

  // Standardize once up front; the per-round SVM then trains raw.
  FeatureMatrix scaled = m;
  Standardizer scaler;
  scaled.values = detail::fit_standardized(scaler, m);

  SvmOptions svm;
  svm.kernel = SvmOptions::Kernel::kLinear;
  svm.standardize = false;

  std::vector<size_t> surviving(d);
  std::iota(surviving.begin(), surviving.end(), size_t{0});
  std::vector<size_t> eliminated;  // first eliminated first
  while (!surviving.empty()) {
    if (surviving.size() == 1) {
      eliminated.push_back(surviving[0]);
      break;
    }
    const FeatureMatrix sub = scaled.select_columns(surviving);
    const std::unique_ptr<SvmModel> model = SvmModel::train(sub, svm);
    const std::vector<double> w = model->linear_weights();
    size_t drop = 0;
    for (size_t j = 1; j < w.size(); ++j) {
      const double a = w[j] * w[j], b = w[drop] * w[drop];
      // Ties drop the higher original column index; surviving is ascending.
      if (a < b || (a == b && surviving[j] > surviving[drop])) drop = j;
    }
    eliminated.push_back(surviving[drop]);
    surviving.erase(surviving.begin() + static_cast<long>(drop));
  }

  RankedFeatures out;
  out.method = selector_name(SelectorKind::kSvmRfe);
  out.order.assign(eliminated.rbegin(), eliminated.rend());
  out.names.resize(d);
  out.scores.resize(d);
  for (size_t r = 0; r < d; ++r) {
    out.names[r] = m.columns[out.order[r]];
    out.scores[r] = static_cast<double>(d - r);  // 1-based elimination position
  }
  return out;
}

RankedFeatures rf_rank(const FeatureMatrix& m, uint64_t seed, size_t n_trees) {
  require_rankable(m, "rf");
  if (n_trees == 0) throw ValidationError("rf: need at least one tree");
  const size_t n = m.rows(), d = m.cols();
  const size_t max_features = static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(d))));

  std::vector<double> mean_importance(d, 0.0);
  for (size_t t = 0; t < n_trees; ++t) {
    Rng rng(derive_seed(seed, "rf", t));
    std::vector<size_t> bootstrap(n);
    for (size_t i = 0; i < n; ++i) bootstrap[i] = static_cast<size_t>(rng.below(n));
    detail::TreeBuildOptions build;
    build.max_features = max_features;
    build.rng = &rng;
    const detail::BuiltTree tree = detail::build_cart(m, bootstrap, build);
    for (size_t j = 0; j < d; ++j) mean_importance[j] += tree.importance[j];
  }
  for (double& v : mean_importance) v /= static_cast<double>(n_trees);

  RankedFeatures out;
  out.method = selector_name(SelectorKind::kRandomForest);
  fill_ranking(&out, m, mean_importance);
  return out;
}

RankedFeatures rank_features(SelectorKind kind, const FeatureMatrix& m, uint64_t seed) {
  switch (kind) {
    case SelectorKind::kMic: return mic_rank(m);
    case SelectorKind::kSvmRfe: return svm_rfe_rank(m);
    case SelectorKind::kRandomForest: return rf_rank(m, seed);
  }
  throw ValidationError("unknown selector kind");
}

size_t select_top_count(size_t total, double proportion) {
  if (!(proportion > 0.0 && proportion <= 1.0))
    throw ValidationError(strprintf("proportion %g outside (0, 1]", proportion));
  if (total == 0) throw ValidationError("cannot select from zero features");
  const size_t k = static_cast<size_t>(std::floor(proportion * static_cast<double>(total)));
  return std::max<size_t>(k, 1);
}

std::vector<size_t> select_top(const RankedFeatures& ranked, size_t k) {
  if (k == 0 || k > ranked.order.size())
    throw ValidationError(strprintf("top-%zu out of range for %zu ranked features", k, ranked.order.size()));
  std::vector<size_t> keep(ranked.order.begin(), ranked.order.begin() + static_cast<long>(k));
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace skyselect
