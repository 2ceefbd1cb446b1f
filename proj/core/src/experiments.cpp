#include "skyselect/experiments.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>

#include "skyselect/common.hpp"
#include "skyselect/csv.hpp"
#include "skyselect/parallel.hpp"

namespace skyselect {

namespace {

void validate_proportion(double p) {
  if (!(p > 0.0 && p <= 1.0))
    throw ValidationError(strprintf("feature proportion %.6g outside (0, 1]", p));
}

LoocvOptions cell_options(SelectorKind selector, ModelKind model, double proportion,
                          const ExperimentOptions& opts) {
  LoocvOptions lo;
  lo.selector = selector;
  lo.model = model;
  lo.proportion = proportion;
  lo.leak_compat = opts.leak_compat;
  lo.seed = opts.seed;
  lo.jobs = 1;  // cells are the parallel unit
  lo.train = opts.train;
  return lo;
}

// Rankings per selector over one matrix, shared across proportions and models.
std::array<FoldRankings, 3> rank_all_selectors(const FeatureMatrix& m, const ExperimentOptions& opts) {
  std::array<FoldRankings, 3> out;
  const auto& selectors = all_selector_kinds();
  for (size_t s = 0; s < selectors.size(); ++s)
    out[s] = compute_fold_rankings(m, selectors[s], opts.seed, opts.jobs, opts.leak_compat);
  return out;
}

void take_best(BestCell& cell, double value, SelectorKind selector, ModelKind model, bool first) {
  if (first || value > cell.value) cell = {value, selector, model};
}

}  // namespace

std::vector<double> default_proportions() {
  std::vector<double> out;
  for (int pct = 15; pct <= 95; pct += 10) out.push_back(pct / 100.0);
  return out;
}

SweepResult proportion_sweep(const FeatureMatrix& full, const std::vector<double>& proportions,
                             const ExperimentOptions& opts) {
  if (proportions.empty()) throw ValidationError("proportion sweep: empty proportion list");
  for (double p : proportions) validate_proportion(p);

  const FeatureMatrix m = matrix_for_combo(full, DatasetCombo::kAll);
  const auto rankings = rank_all_selectors(m, opts);
  const auto& selectors = all_selector_kinds();
  const auto& models = all_model_kinds();
  const size_t pairs = selectors.size() * models.size();

  std::vector<Metrics> cells(proportions.size() * pairs);
  parallel_for(cells.size(), opts.jobs, [&](size_t idx) {
    const size_t pi = idx / pairs;
    const size_t si = (idx % pairs) / models.size();
    const size_t mi = idx % models.size();
    const LoocvOptions lo = cell_options(selectors[si], models[mi], proportions[pi], opts);
    cells[idx] = loocv_with_rankings(m, rankings[si], lo).metrics;
  });

  SweepResult out;
  out.combo = DatasetCombo::kAll;
  out.rows.resize(proportions.size());
  for (size_t pi = 0; pi < proportions.size(); ++pi) {
    SweepRow& row = out.rows[pi];
    row.proportion = proportions[pi];
    row.selected_count = select_top_count(m.cols(), proportions[pi]);
    for (size_t si = 0; si < selectors.size(); ++si) {
      for (size_t mi = 0; mi < models.size(); ++mi) {
        const Metrics& mt = cells[pi * pairs + si * models.size() + mi];
        const bool first = si == 0 && mi == 0;
        take_best(row.acc, mt.acc, selectors[si], models[mi], first);
        take_best(row.precision, mt.precision, selectors[si], models[mi], first);
        take_best(row.recall, mt.recall, selectors[si], models[mi], first);
        take_best(row.f1, mt.f1, selectors[si], models[mi], first);
        take_best(row.auc, mt.auc, selectors[si], models[mi], first);
      }
    }
  }
  return out;
}

GridResult method_grid(const FeatureMatrix& full, DatasetCombo combo, double proportion,
                       const ExperimentOptions& opts) {
  validate_proportion(proportion);
  const FeatureMatrix m = matrix_for_combo(full, combo);
  const auto rankings = rank_all_selectors(m, opts);
  const auto& selectors = all_selector_kinds();
  const auto& models = all_model_kinds();

  GridResult out;
  out.combo = combo;
  out.proportion = proportion;
  out.selected_count = select_top_count(m.cols(), proportion);
  out.cells.resize(selectors.size() * models.size());
  parallel_for(out.cells.size(), opts.jobs, [&](size_t idx) {
    const size_t si = idx / models.size();
    const size_t mi = idx % models.size();
    GridCell cell;
    cell.selector = selectors[si];
    cell.model = models[mi];
    cell.report = loocv_with_rankings(m, rankings[si], cell_options(cell.selector, cell.model, proportion, opts));
    out.cells[idx] = std::move(cell);
  });

  auto assign_ranks = [&](double (*metric)(const GridCell&), size_t GridCell::* rank) {
    std::vector<size_t> order(out.cells.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return metric(out.cells[a]) > metric(out.cells[b]); });
    for (size_t pos = 0; pos < order.size(); ++pos) out.cells[order[pos]].*rank = pos + 1;
  };
  assign_ranks([](const GridCell& c) { return c.report.metrics.acc; }, &GridCell::rank_acc);
  assign_ranks([](const GridCell& c) { return c.report.metrics.auc; }, &GridCell::rank_auc);
  assign_ranks([](const GridCell& c) { return c.report.metrics.f1; }, &GridCell::rank_f1);
  return out;
}

AblationResult ablation(const FeatureMatrix& full, SelectorKind selector, ModelKind model,
                        double proportion, const ExperimentOptions& opts) {
  validate_proportion(proportion);
  const auto& combos = all_combos();

  AblationResult out;
  out.selector = selector;
  out.model = model;
  out.proportion = proportion;
  out.rows.resize(combos.size());
  parallel_for(combos.size(), opts.jobs, [&](size_t i) {
    const FeatureMatrix m = matrix_for_combo(full, combos[i]);
    AblationRow row;
    row.combo = combos[i];
    row.feature_count = m.cols();
    row.selected_count = select_top_count(m.cols(), proportion);
    row.report = loocv(m, cell_options(selector, model, proportion, opts));
    out.rows[i] = std::move(row);
  });
  return out;
}

InterpretabilityReport interpretability_report(const FeatureMatrix& full, const ExperimentOptions& opts,
                                               double proportion) {
  validate_proportion(proportion);
  const FeatureMatrix m = matrix_for_combo(full, DatasetCombo::kAll);

  InterpretabilityReport out;
  out.proportion = proportion;
  out.total_features = m.cols();
  const RankedFeatures ranked = mic_rank(m);
  const FeatureMatrix sel = m.select_columns(select_top(ranked, select_top_count(m.cols(), proportion)));
  out.selected = sel.columns;

  const auto tree = DtreeModel::train(sel, opts.train.dtree);
  const auto& nodes = tree->nodes();
  out.node_count = nodes.size();
  if (nodes[0].feature >= 0) {
    out.root_feature = sel.columns[static_cast<size_t>(nodes[0].feature)];
    out.root_threshold = nodes[0].threshold;
  }

  // Indented depth-first listing; left branch means value <= threshold.
  std::string text;
  struct Frame {
    int node;
    size_t depth;
  };
  std::vector<Frame> stack = {{0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const TreeNode& nd = nodes[static_cast<size_t>(f.node)];
    out.depth = std::max(out.depth, f.depth);
    const std::string pad(2 * f.depth, ' ');
    if (nd.feature < 0) {
      text += strprintf("%s[%d] leaf p(expert)=%.4f (n=%zu, pos=%zu, gini=%.4f)\n", pad.c_str(),
                        f.node, nd.value, nd.n, nd.n_pos, nd.gini);
    } else {
      text += strprintf("%s[%d] %s <= %.4f -> [%d] else [%d] (n=%zu, pos=%zu, gini=%.4f)\n",
                        pad.c_str(), f.node, sel.columns[static_cast<size_t>(nd.feature)].c_str(),
                        nd.threshold, nd.left, nd.right, nd.n, nd.n_pos, nd.gini);
      stack.push_back({nd.right, f.depth + 1});
      stack.push_back({nd.left, f.depth + 1});
    }
  }
  out.tree_text = std::move(text);

  const std::vector<double> imp = tree->importances();
  std::vector<size_t> order(imp.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return imp[a] > imp[b]; });
  out.importances.reserve(order.size());
  for (size_t c : order) out.importances.emplace_back(sel.columns[c], imp[c]);
  return out;
}

Provenance make_provenance(uint64_t seed, const std::string& flags) {
  Provenance p;
  p.seed = seed;
  p.flags = flags;
  p.registry_digest = FeatureRegistry::instance().digest();
  p.version = kVersion;
  return p;
}

std::string provenance_text(const Provenance& p) {
  std::string out = "skyselect provenance\n";
  out += strprintf("version: %s\n", p.version.c_str());
  out += strprintf("seed: %llu\n", static_cast<unsigned long long>(p.seed));
  out += strprintf("flags: %s\n", p.flags.c_str());
  out += strprintf("registry_digest: %016llx\n", static_cast<unsigned long long>(p.registry_digest));
  return out;
}

namespace {

std::string selector_cell(SelectorKind k) { return selector_name(k); }
std::string model_cell(ModelKind k) { return model_kind_name(k); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) throw DataError(strprintf("%s: cannot open file for writing", path.c_str()));
  out << text;
  if (!out.good()) throw DataError(strprintf("%s: write failed", path.c_str()));
}

std::vector<std::string> metric_cells(const EvalReport& r) {
  return {std::to_string(r.cm.tp),   std::to_string(r.cm.fp),     std::to_string(r.cm.tn),
          std::to_string(r.cm.fn),   fmt9(r.metrics.acc),         fmt9(r.metrics.precision),
          fmt9(r.metrics.recall),    fmt9(r.metrics.f1),          fmt9(r.metrics.auc)};
}

}  // namespace

void write_sweep_csv(const std::string& path, const SweepResult& r) {
  CsvWriter w(path);
  std::vector<std::string> header = {"proportion", "selected_count"};
  for (const char* metric : {"acc", "precision", "recall", "f1", "auc"}) {
    header.push_back(strprintf("best_%s", metric));
    header.push_back(strprintf("best_%s_selector", metric));
    header.push_back(strprintf("best_%s_model", metric));
  }
  w.write_row(header);
  for (const SweepRow& row : r.rows) {
    std::vector<std::string> cells = {fmt9(row.proportion), std::to_string(row.selected_count)};
    for (const BestCell* b : {&row.acc, &row.precision, &row.recall, &row.f1, &row.auc}) {
      cells.push_back(fmt9(b->value));
      cells.push_back(selector_cell(b->selector));
      cells.push_back(model_cell(b->model));
    }
    w.write_row(cells);
  }
  w.close();
}

void write_grid_csv(const std::string& path, const GridResult& r) {
  CsvWriter w(path);
  w.write_row({"selector", "model", "combo", "proportion", "selected_count", "tp", "fp", "tn", "fn",
               "acc", "precision", "recall", "f1", "auc", "rank_acc", "rank_auc", "rank_f1"});
  for (const GridCell& c : r.cells) {
    std::vector<std::string> cells = {selector_cell(c.selector), model_cell(c.model),
                                      combo_name(r.combo), fmt9(r.proportion),
                                      std::to_string(r.selected_count)};
    for (std::string& s : metric_cells(c.report)) cells.push_back(std::move(s));
    cells.push_back(std::to_string(c.rank_acc));
    cells.push_back(std::to_string(c.rank_auc));
    cells.push_back(std::to_string(c.rank_f1));
    w.write_row(cells);
  }
  w.close();
}

void write_ablation_csv(const std::string& path, const AblationResult& r) {
  CsvWriter w(path);
  w.write_row({"combo", "feature_count", "selected_count", "tp", "fp", "tn", "fn", "acc",
               "precision", "recall", "f1", "auc"});
  for (const AblationRow& row : r.rows) {
    std::vector<std::string> cells = {combo_name(row.combo), std::to_string(row.feature_count),
                                      std::to_string(row.selected_count)};
    for (std::string& s : metric_cells(row.report)) cells.push_back(std::move(s));
    w.write_row(cells);
  }
  w.close();
}

void write_roc_csv(const std::string& path, const std::vector<RocPoint>& roc) {
  CsvWriter w(path);
  w.write_row({"fpr", "tpr"});
  for (const RocPoint& pt : roc) w.write_row({fmt9(pt.fpr), fmt9(pt.tpr)});
  w.close();
}

void write_dtree_report(const std::string& path, const InterpretabilityReport& r, uint64_t seed) {
  std::string text = "decision tree interpretability report\n";
  text += "fit: full cohort, no cross-validation holdout\n";
  text += strprintf("seed: %llu\n", static_cast<unsigned long long>(seed));
  text += strprintf("features: mic top %zu of %zu (proportion %s)\n", r.selected.size(),
                    r.total_features, fmt9(r.proportion).c_str());
  text += strprintf("nodes: %zu, depth: %zu\n", r.node_count, r.depth);
  if (!r.root_feature.empty())
    text += strprintf("root: %s <= %.4f\n", r.root_feature.c_str(), r.root_threshold);
  text += "\n";
  text += r.tree_text;
  write_text_file(path, text);
}

void write_importances_csv(const std::string& path, const InterpretabilityReport& r) {
  CsvWriter w(path);
  w.write_row({"feature", "importance"});
  for (const auto& [name, value] : r.importances) w.write_row({name, fmt9(value)});
  w.close();
}

void write_provenance(const std::string& path, const Provenance& p) {
  write_text_file(path, provenance_text(p));
}

}  // namespace skyselect
