#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skyselect/evaluation.hpp"
#include "skyselect/registry.hpp"

namespace skyselect {

// Shared knobs for the three studies. `jobs` never changes any output byte;
// it only sets the worker count.
struct ExperimentOptions {
  uint64_t seed = 7;
  bool leak_compat = false;
  size_t jobs = 1;
  TrainOptions train;
};

// {0.15, 0.25, ..., 0.95}
std::vector<double> default_proportions();

// The winner of one metric at one proportion.
struct BestCell {
  double value = 0.0;
  SelectorKind selector = SelectorKind::kMic;
  ModelKind model = ModelKind::kSvm;
};

struct SweepRow {
  double proportion = 0.0;
  size_t selected_count = 0;
  BestCell acc, precision, recall, f1, auc;
};

struct SweepResult {
  DatasetCombo combo = DatasetCombo::kAll;
  std::vector<SweepRow> rows;  // one per requested proportion, in input order
};

// Runs all 15 selector x model pairs per proportion on the given combo and
// keeps the best value of each metric independently. Ties keep the earliest
// pair in canonical order (selector-major, model-minor).
SweepResult proportion_sweep(const FeatureMatrix& full, const std::vector<double>& proportions,
                             const ExperimentOptions& opts);

struct GridCell {
  SelectorKind selector = SelectorKind::kMic;
  ModelKind model = ModelKind::kSvm;
  EvalReport report;
  size_t rank_acc = 0, rank_auc = 0, rank_f1 = 0;  // 1-based; ties keep canonical order
};

struct GridResult {
  DatasetCombo combo = DatasetCombo::kAll;
  double proportion = 0.65;
  size_t selected_count = 0;
  std::vector<GridCell> cells;  // all 15 pairs, canonical order
};

GridResult method_grid(const FeatureMatrix& full, DatasetCombo combo, double proportion,
                       const ExperimentOptions& opts);

struct AblationRow {
  DatasetCombo combo = DatasetCombo::kAll;
  size_t feature_count = 0;   // registry columns in the combo
  size_t selected_count = 0;  // after the proportion cut
  EvalReport report;
};

struct AblationResult {
  SelectorKind selector = SelectorKind::kMic;
  ModelKind model = ModelKind::kSvm;
  double proportion = 0.65;
  std::vector<AblationRow> rows;  // one per combo, canonical order
};

AblationResult ablation(const FeatureMatrix& full, SelectorKind selector, ModelKind model,
                        double proportion, const ExperimentOptions& opts);

// A single decision tree fit on the whole cohort (explicitly not
// cross-validated; the report header says so) over the MIC-selected top
// proportion of the full feature set.
struct InterpretabilityReport {
  double proportion = 0.65;
  size_t total_features = 0;
  std::vector<std::string> selected;  // column names fed to the tree
  std::string root_feature;           // empty when the tree is a bare leaf
  double root_threshold = 0.0;
  size_t depth = 0;       // edges from root to the deepest leaf
  size_t node_count = 0;  // splits + leaves
  std::string tree_text;  // indented split/leaf listing, thresholds at 4 decimals
  std::vector<std::pair<std::string, double>> importances;  // descending, sums to 1 given a split
};

InterpretabilityReport interpretability_report(const FeatureMatrix& full, const ExperimentOptions& opts,
                                               double proportion = 0.65);

// Audit block attached to every experiment output directory. Holds only
// bytes-determining inputs, so reruns stay byte-identical (no timestamps, no
// worker counts).
struct Provenance {
  uint64_t seed = 0;
  std::string flags;  // canonical "key=value" list, space separated
  uint64_t registry_digest = 0;
  std::string version;
};

Provenance make_provenance(uint64_t seed, const std::string& flags);
std::string provenance_text(const Provenance& p);

void write_sweep_csv(const std::string& path, const SweepResult& r);
void write_grid_csv(const std::string& path, const GridResult& r);
void write_ablation_csv(const std::string& path, const AblationResult& r);
void write_roc_csv(const std::string& path, const std::vector<RocPoint>& roc);
void write_dtree_report(const std::string& path, const InterpretabilityReport& r, uint64_t seed);
void write_importances_csv(const std::string& path, const InterpretabilityReport& r);
void write_provenance(const std::string& path, const Provenance& p);

}  // namespace skyselect
