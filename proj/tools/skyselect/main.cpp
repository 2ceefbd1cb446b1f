// skyselect: expert/novice classification from flight-simulator telemetry.
// Subcommands cover the full pipeline (synth, extract, select, train,
// evaluate), the three studies (sweep, grid, ablate, interpret), group
// statistics, and a one-shot seeded reproduction.
//
// Exit codes: 0 success, 1 bad flags/options, 2 bad input data.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "skyselect/common.hpp"
#include "skyselect/csv.hpp"
#include "skyselect/evaluation.hpp"
#include "skyselect/experiments.hpp"
#include "skyselect/extract.hpp"
#include "skyselect/feature_select.hpp"
#include "skyselect/registry.hpp"
#include "skyselect/rng.hpp"
#include "skyselect/stats.hpp"
#include "skyselect/synth.hpp"
#include "skyselect/telemetry.hpp"

namespace fs = std::filesystem;
using namespace skyselect;

namespace {

void log_line(const std::string& msg) { std::fprintf(stderr, "[skyselect] %s\n", msg.c_str()); }

class StageTimer {
 public:
  explicit StageTimer(std::string name)
      : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {
    log_line(name_ + "...");
  }
  ~StageTimer() {
    const auto dt = std::chrono::steady_clock::now() - start_;
    const double s = std::chrono::duration<double>(dt).count();
    log_line(strprintf("%s done in %.1f s", name_.c_str(), s));
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

size_t default_jobs() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) throw DataError(strprintf("%s: cannot open file for writing", path.c_str()));
  out << text;
  if (!out.good()) throw DataError(strprintf("%s: write failed", path.c_str()));
}

FeatureMatrix load_features(const std::string& path) {
  FeatureMatrix m = read_features_csv(path);
  if (m.rows() == 0) throw DataError(path + ": no participant rows");
  return m;
}

// Shared per-subcommand settings. The seed is the user-facing master seed;
// every stage derives its own working seed from (seed, stage name).
struct Common {
  uint64_t seed = 7;
  size_t jobs = default_jobs();
  bool leak_compat = false;
  std::string out;
};

void add_seed_option(CLI::App* sub, uint64_t& seed) {
  sub->add_option("--seed", seed, "master seed (env SKYSELECT_SEED, default 7)")
      ->envname("SKYSELECT_SEED");
}

void add_jobs_option(CLI::App* sub, size_t& jobs) {
  sub->add_option("--jobs", jobs, "worker threads (default: logical cores); never changes output bytes");
}

ExperimentOptions experiment_options(const Common& c, const char* stage) {
  ExperimentOptions opts;
  opts.seed = derive_seed(c.seed, stage);
  opts.leak_compat = c.leak_compat;
  opts.jobs = c.jobs;
  return opts;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  size_t experts = 23, novices = 23;
  double gaze_hz = 120.0, flight_hz = 30.0;
  Common c;
};

void run_synth(const SynthArgs& a) {
  CohortSpec spec;
  spec.n_expert = a.experts;
  spec.n_novice = a.novices;
  spec.seed = derive_seed(a.c.seed, "synth");
  spec.gaze_hz = a.gaze_hz;
  spec.flight_hz = a.flight_hz;
  StageTimer timer(strprintf("synth: %zu experts + %zu novices -> %s", a.experts, a.novices,
                             a.c.out.c_str()));
  const auto entries = generate_cohort(spec, a.c.out, a.c.jobs);
  log_line(strprintf("wrote %zu participants, manifest at %s/manifest.csv", entries.size(),
                     a.c.out.c_str()));
}

// ---------------------------------------------------------------------------
// extract

struct ExtractArgs {
  std::string manifest;
  Common c;
};

void run_extract(const ExtractArgs& a) {
  StageTimer timer("extract: " + a.manifest);
  const Cohort cohort = load_cohort(a.manifest);
  log_line(strprintf("loaded %zu participants", cohort.size()));
  FeatureMatrix m = extract_cohort_features(cohort, a.c.jobs);
  const size_t imputed = impute_missing(m);
  if (imputed > 0) log_line(strprintf("imputed %zu missing cells with column means", imputed));
  fs::create_directories(a.c.out);
  write_features_csv(a.c.out + "/features.csv", m);
  for (DatasetCombo combo : all_combos()) {
    std::string text;
    for (const std::string& name : FeatureRegistry::instance().names(combo)) text += name + "\n";
    write_text(a.c.out + "/columns_" + combo_name(combo) + ".txt", text);
  }
  log_line(strprintf("wrote %s/features.csv (%zu rows x %zu features)", a.c.out.c_str(), m.rows(),
                     m.cols()));
}

// ---------------------------------------------------------------------------
// select

struct SelectArgs {
  std::string features;
  std::string method = "mic";
  std::string dataset = "aoi_em_qar";
  double proportion = 0.65;
  Common c;
};

void run_select(const SelectArgs& a) {
  const SelectorKind kind = parse_selector(a.method);
  const FeatureMatrix m = matrix_for_combo(load_features(a.features), parse_combo(a.dataset));
  const RankedFeatures ranked = rank_features(kind, m, derive_seed(a.c.seed, "select"));
  fs::create_directories(a.c.out);

  CsvWriter w(a.c.out + "/ranking.csv");
  w.write_row({"rank", "name", "score"});
  for (size_t i = 0; i < ranked.order.size(); ++i)
    w.write_row({std::to_string(i + 1), ranked.names[i], fmt9(ranked.scores[i])});
  w.close();

  const size_t k = select_top_count(m.cols(), a.proportion);
  std::string text;
  for (size_t col : select_top(ranked, k)) text += m.columns[col] + "\n";
  write_text(a.c.out + "/selected.txt", text);
  log_line(strprintf("ranked %zu features with %s; kept top %zu (proportion %s)", m.cols(),
                     selector_name(kind).c_str(), k, fmt9(a.proportion).c_str()));
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string features;
  std::string model = "svm";
  std::string selector;  // empty: train on every column
  std::string dataset = "aoi_em_qar";
  double proportion = 0.65;
  Common c;
};

void run_train(const TrainArgs& a) {
  const ModelKind kind = parse_model_kind(a.model);
  FeatureMatrix m = matrix_for_combo(load_features(a.features), parse_combo(a.dataset));
  if (!a.selector.empty()) {
    const RankedFeatures ranked =
        rank_features(parse_selector(a.selector), m, derive_seed(a.c.seed, "train"));
    m = m.select_columns(select_top(ranked, select_top_count(m.cols(), a.proportion)));
  }
  const auto model = train_model(kind, m);
  const fs::path out(a.c.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_model_file(a.c.out, *model, m.columns);
  log_line(strprintf("trained %s on %zu rows x %zu features -> %s",
                     model_kind_name(kind).c_str(), m.rows(), m.cols(), a.c.out.c_str()));
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string features;
  std::string selector = "mic";
  std::string model = "svm";
  std::string dataset = "aoi_em_qar";
  double proportion = 0.65;
  Common c;
};

void run_evaluate(const EvaluateArgs& a) {
  const FeatureMatrix m = matrix_for_combo(load_features(a.features), parse_combo(a.dataset));
  LoocvOptions lo;
  lo.selector = parse_selector(a.selector);
  lo.model = parse_model_kind(a.model);
  lo.proportion = a.proportion;
  lo.leak_compat = a.c.leak_compat;
  lo.seed = derive_seed(a.c.seed, "evaluate");
  lo.jobs = a.c.jobs;
  StageTimer timer(strprintf("evaluate: %s + %s on %s at %s", a.selector.c_str(), a.model.c_str(),
                             a.dataset.c_str(), fmt9(a.proportion).c_str()));
  const EvalReport r = loocv(m, lo);

  fs::create_directories(a.c.out);
  CsvWriter w(a.c.out + "/metrics.csv");
  w.write_row({"selector", "model", "combo", "proportion", "tp", "fp", "tn", "fn", "acc",
               "precision", "recall", "f1", "auc", "excluded_folds"});
  w.write_row({selector_name(lo.selector), model_kind_name(lo.model), a.dataset,
               fmt9(a.proportion), std::to_string(r.cm.tp), std::to_string(r.cm.fp),
               std::to_string(r.cm.tn), std::to_string(r.cm.fn), fmt9(r.metrics.acc),
               fmt9(r.metrics.precision), fmt9(r.metrics.recall), fmt9(r.metrics.f1),
               fmt9(r.metrics.auc), std::to_string(r.excluded_folds.size())});
  w.close();

  CsvWriter p(a.c.out + "/predictions.csv");
  p.write_row({"participant_id", "label", "score", "predicted"});
  for (const PooledPrediction& pp : r.pooled)
    p.write_row({pp.id, std::to_string(pp.label), fmt9(pp.score), std::to_string(pp.predicted)});
  p.close();

  write_roc_csv(a.c.out + "/roc.csv", r.roc);
  log_line(strprintf("acc %.4f, auc %.4f (%zu folds pooled)", r.metrics.acc, r.metrics.auc,
                     r.pooled.size()));
}

// ---------------------------------------------------------------------------
// experiments

struct SweepArgs {
  std::string features;
  std::vector<double> proportions = default_proportions();
  Common c;
};

std::string proportions_flag(const std::vector<double>& props) {
  std::string s;
  for (size_t i = 0; i < props.size(); ++i) s += (i ? "," : "") + fmt9(props[i]);
  return s;
}

SweepResult run_sweep_into(const FeatureMatrix& full, const SweepArgs& a, bool with_provenance) {
  StageTimer timer("sweep: 15 pairs x " + std::to_string(a.proportions.size()) + " proportions");
  const SweepResult r = proportion_sweep(full, a.proportions, experiment_options(a.c, "sweep"));
  fs::create_directories(a.c.out);
  write_sweep_csv(a.c.out + "/sweep.csv", r);
  if (with_provenance) {
    const std::string flags = strprintf("cmd=sweep combo=aoi_em_qar proportions=%s leak_compat=%d",
                                        proportions_flag(a.proportions).c_str(),
                                        a.c.leak_compat ? 1 : 0);
    write_provenance(a.c.out + "/provenance.txt", make_provenance(a.c.seed, flags));
  }
  return r;
}

struct GridArgs {
  std::string features;
  std::string dataset = "aoi_em_qar";
  double proportion = 0.65;
  Common c;
};

GridResult run_grid_into(const FeatureMatrix& full, const GridArgs& a, bool with_provenance) {
  StageTimer timer(strprintf("grid: 15 pairs on %s at %s", a.dataset.c_str(),
                             fmt9(a.proportion).c_str()));
  const GridResult r =
      method_grid(full, parse_combo(a.dataset), a.proportion, experiment_options(a.c, "grid"));
  fs::create_directories(a.c.out);
  write_grid_csv(a.c.out + "/grid.csv", r);
  if (with_provenance) {
    const std::string flags = strprintf("cmd=grid combo=%s proportion=%s leak_compat=%d",
                                        combo_name(r.combo).c_str(), fmt9(r.proportion).c_str(),
                                        a.c.leak_compat ? 1 : 0);
    write_provenance(a.c.out + "/provenance.txt", make_provenance(a.c.seed, flags));
  }
  return r;
}

struct AblateArgs {
  std::string features;
  std::string selector = "mic";
  std::string model = "svm";
  double proportion = 0.65;
  Common c;
};

AblationResult run_ablate_into(const FeatureMatrix& full, const AblateArgs& a, bool with_provenance) {
  StageTimer timer(strprintf("ablate: 7 combos with %s + %s at %s", a.selector.c_str(),
                             a.model.c_str(), fmt9(a.proportion).c_str()));
  const AblationResult r = ablation(full, parse_selector(a.selector), parse_model_kind(a.model),
                                    a.proportion, experiment_options(a.c, "ablate"));
  fs::create_directories(a.c.out + "/roc");
  write_ablation_csv(a.c.out + "/ablation.csv", r);
  for (const AblationRow& row : r.rows)
    write_roc_csv(a.c.out + "/roc/" + combo_name(row.combo) + ".csv", row.report.roc);
  if (with_provenance) {
    const std::string flags = strprintf("cmd=ablate selector=%s model=%s proportion=%s leak_compat=%d",
                                        selector_name(r.selector).c_str(),
                                        model_kind_name(r.model).c_str(),
                                        fmt9(r.proportion).c_str(), a.c.leak_compat ? 1 : 0);
    write_provenance(a.c.out + "/provenance.txt", make_provenance(a.c.seed, flags));
  }
  return r;
}

struct InterpretArgs {
  std::string features;
  double proportion = 0.65;
  Common c;
};

InterpretabilityReport run_interpret_into(const FeatureMatrix& full, const InterpretArgs& a,
                                          bool with_provenance) {
  StageTimer timer("interpret: decision tree on mic-selected features");
  const InterpretabilityReport r =
      interpretability_report(full, experiment_options(a.c, "interpret"), a.proportion);
  fs::create_directories(a.c.out);
  write_dtree_report(a.c.out + "/dtree.txt", r, a.c.seed);
  write_importances_csv(a.c.out + "/importances.csv", r);
  if (with_provenance) {
    const std::string flags = strprintf("cmd=interpret proportion=%s leak_compat=%d",
                                        fmt9(r.proportion).c_str(), a.c.leak_compat ? 1 : 0);
    write_provenance(a.c.out + "/provenance.txt", make_provenance(a.c.seed, flags));
  }
  return r;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
  std::string features;
  std::string feature;  // optional filter
  std::string out;      // optional CSV directory
};

struct StatsRow {
  std::string feature;
  GroupSummary novice, expert;
  TTestResult tt;  // novice vs expert: sign follows novice - expert
};

std::vector<StatsRow> stats_rows(const FeatureMatrix& m) {
  std::vector<double> nov, exp;
  std::vector<StatsRow> rows;
  rows.reserve(m.cols());
  for (size_t c = 0; c < m.cols(); ++c) {
    nov.clear();
    exp.clear();
    for (size_t r = 0; r < m.rows(); ++r)
      (m.labels[r] == 1 ? exp : nov).push_back(m.at(r, c));
    StatsRow row;
    row.feature = m.columns[c];
    row.novice = summarize(nov);
    row.expert = summarize(exp);
    row.tt = t_test(row.novice, row.expert);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string stats_row_text(const StatsRow& r) {
  const std::string stars = significance_stars(r.tt.p);
  const std::string t_text =
      r.tt.infinite ? "inf" : strprintf("%.2f", r.tt.t);
  return strprintf("%-40s novice %zu: %.2f (%.2f)   expert %zu: %.2f (%.2f)   t(%.0f) = %s%s   d = %.2f",
                   r.feature.c_str(), r.novice.n, r.novice.mean, r.novice.sd, r.expert.n,
                   r.expert.mean, r.expert.sd, r.tt.df, t_text.c_str(),
                   stars.empty() ? "" : (" " + stars).c_str(), r.tt.cohen_d);
}

void write_stats_csv(const std::string& path, const std::vector<StatsRow>& rows) {
  CsvWriter w(path);
  w.write_row({"feature", "novice_n", "novice_mean", "novice_sd", "expert_n", "expert_mean",
               "expert_sd", "t", "df", "p", "stars", "d", "infinite"});
  for (const StatsRow& r : rows)
    w.write_row({r.feature, std::to_string(r.novice.n), fmt9(r.novice.mean), fmt9(r.novice.sd),
                 std::to_string(r.expert.n), fmt9(r.expert.mean), fmt9(r.expert.sd), fmt9(r.tt.t),
                 fmt9(r.tt.df), fmt9(r.tt.p), significance_stars(r.tt.p), fmt9(r.tt.cohen_d),
                 r.tt.infinite ? "1" : "0"});
  w.close();
}

void run_stats(const StatsArgs& a) {
  const FeatureMatrix m = load_features(a.features);
  if (!m.has_both_classes()) throw DataError(a.features + ": need both classes for group statistics");
  std::vector<StatsRow> rows = stats_rows(m);
  if (!a.feature.empty()) {
    m.column_index(a.feature);  // throws on unknown name
    std::vector<StatsRow> kept;
    for (StatsRow& r : rows)
      if (r.feature == a.feature) kept.push_back(std::move(r));
    rows = std::move(kept);
  }
  for (const StatsRow& r : rows) std::printf("%s\n", stats_row_text(r).c_str());
  if (!a.out.empty()) {
    fs::create_directories(a.out);
    write_stats_csv(a.out + "/stats.csv", rows);
    log_line(strprintf("wrote %s/stats.csv (%zu rows)", a.out.c_str(), rows.size()));
  }
}

// ---------------------------------------------------------------------------
// reproduce

struct ReproduceArgs {
  Common c;
};

std::string md_metric(double v) { return strprintf("%.4f", v); }

std::string reproduce_summary(const ReproduceArgs& a, const FeatureMatrix& m, const SweepResult& sweep,
                              const GridResult& grid, const AblationResult& abl,
                              const InterpretabilityReport& tree) {
  std::string md = "# skyselect reproduction\n\n";
  md += strprintf("- seed: %llu\n", static_cast<unsigned long long>(a.c.seed));
  size_t experts = 0;
  for (int label : m.labels) experts += label == 1 ? 1 : 0;
  md += strprintf("- cohort: %zu experts, %zu novices (synthetic)\n", experts, m.rows() - experts);
  md += strprintf("- protocol: leave-one-out CV, %s\n",
                  a.c.leak_compat ? "ranking once on the full matrix (leak_compat)"
                                  : "selection inside each fold");
  md += strprintf("- features: %zu (aoi 19, em 7, qar 37), registry digest %016llx\n\n", m.cols(),
                  static_cast<unsigned long long>(FeatureRegistry::instance().digest()));

  const GridCell* headline = nullptr;
  for (const GridCell& cell : grid.cells)
    if (cell.selector == SelectorKind::kMic && cell.model == ModelKind::kSvm) headline = &cell;
  if (headline != nullptr) {
    md += strprintf("## headline: svm + mic on %s at proportion %s\n\n",
                    combo_name(grid.combo).c_str(), fmt9(grid.proportion).c_str());
    md += "| metric | value |\n| --- | --- |\n";
    const Metrics& mt = headline->report.metrics;
    md += "| accuracy | " + md_metric(mt.acc) + " |\n";
    md += "| precision | " + md_metric(mt.precision) + " |\n";
    md += "| recall | " + md_metric(mt.recall) + " |\n";
    md += "| f1 | " + md_metric(mt.f1) + " |\n";
    md += "| auc | " + md_metric(mt.auc) + " |\n\n";
  }

  md += strprintf("## method grid (%s, proportion %s)\n\n", combo_name(grid.combo).c_str(),
                  fmt9(grid.proportion).c_str());
  md += "| selector | model | acc | auc | f1 | rank by acc |\n| --- | --- | --- | --- | --- | --- |\n";
  for (const GridCell& cell : grid.cells)
    md += strprintf("| %s | %s | %s | %s | %s | %zu |\n", selector_name(cell.selector).c_str(),
                    model_kind_name(cell.model).c_str(), md_metric(cell.report.metrics.acc).c_str(),
                    md_metric(cell.report.metrics.auc).c_str(),
                    md_metric(cell.report.metrics.f1).c_str(), cell.rank_acc);
  md += "\n";

  md += strprintf("## ablation (%s + %s, proportion %s)\n\n", model_kind_name(abl.model).c_str(),
                  selector_name(abl.selector).c_str(), fmt9(abl.proportion).c_str());
  md += "| combo | features | selected | acc | auc | f1 |\n| --- | --- | --- | --- | --- | --- |\n";
  for (const AblationRow& row : abl.rows)
    md += strprintf("| %s | %zu | %zu | %s | %s | %s |\n", combo_name(row.combo).c_str(),
                    row.feature_count, row.selected_count,
                    md_metric(row.report.metrics.acc).c_str(),
                    md_metric(row.report.metrics.auc).c_str(),
                    md_metric(row.report.metrics.f1).c_str());
  md += "\n";

  md += "## proportion sweep (best of the 15 selector x model pairs, per metric)\n\n";
  md += "| proportion | best acc | by | best auc | by |\n| --- | --- | --- | --- | --- |\n";
  for (const SweepRow& row : sweep.rows)
    md += strprintf("| %s | %s | %s+%s | %s | %s+%s |\n", fmt9(row.proportion).c_str(),
                    md_metric(row.acc.value).c_str(), selector_name(row.acc.selector).c_str(),
                    model_kind_name(row.acc.model).c_str(), md_metric(row.auc.value).c_str(),
                    selector_name(row.auc.selector).c_str(),
                    model_kind_name(row.auc.model).c_str());
  md += "\n";

  md += "## decision tree (fit on the full cohort)\n\n";
  md += strprintf("- features: mic top %zu of %zu\n", tree.selected.size(), tree.total_features);
  md += strprintf("- %zu nodes, depth %zu\n", tree.node_count, tree.depth);
  if (!tree.root_feature.empty())
    md += strprintf("- root split: %s <= %.4f\n", tree.root_feature.c_str(), tree.root_threshold);
  size_t shown = 0;
  for (const auto& [name, value] : tree.importances) {
    if (value <= 0.0 || shown == 3) break;
    md += strprintf("- importance %zu: %s (%.4f)\n", shown + 1, name.c_str(), value);
    ++shown;
  }
  md += "\n";

  md += "## group statistics (novice vs expert; t and d signed as novice - expert)\n\n";
  md += "| feature | novice mean (sd) | expert mean (sd) | t | d |\n| --- | --- | --- | --- | --- |\n";
  const char* picks[] = {"qar.total_flight_time",
                         "qar.pitch_1s",
                         "qar.dist_err_mean",
                         "qar.dist_err_sd",
                         "aoi.airspeed_indicator",
                         "aoi.attitude_indicator",
                         "aoi.vertical_speed_indicator",
                         "aoi.altitude_indicator"};
  const std::vector<StatsRow> rows = stats_rows(m);
  for (const char* pick : picks)
    for (const StatsRow& r : rows)
      if (r.feature == pick)
        md += strprintf("| %s | %.2f (%.2f) | %.2f (%.2f) | %.2f | %.2f |\n", r.feature.c_str(),
                        r.novice.mean, r.novice.sd, r.expert.mean, r.expert.sd, r.tt.t,
                        r.tt.cohen_d);
  md += "\n";
  return md;
}

void run_reproduce(const ReproduceArgs& a) {
  StageTimer total("reproduce");
  fs::create_directories(a.c.out);

  SynthArgs synth_args;
  synth_args.c = a.c;
  synth_args.c.out = a.c.out + "/cohort";
  run_synth(synth_args);

  ExtractArgs extract_args;
  extract_args.manifest = a.c.out + "/cohort/manifest.csv";
  extract_args.c = a.c;
  extract_args.c.out = a.c.out + "/features";
  run_extract(extract_args);

  const FeatureMatrix full = load_features(a.c.out + "/features/features.csv");

  SweepArgs sweep_args;
  sweep_args.c = a.c;
  const SweepResult sweep = run_sweep_into(full, sweep_args, false);

  GridArgs grid_args;
  grid_args.c = a.c;
  const GridResult grid = run_grid_into(full, grid_args, false);

  AblateArgs ablate_args;
  ablate_args.c = a.c;
  const AblationResult abl = run_ablate_into(full, ablate_args, false);

  InterpretArgs interpret_args;
  interpret_args.c = a.c;
  const InterpretabilityReport tree = run_interpret_into(full, interpret_args, false);

  write_stats_csv(a.c.out + "/stats.csv", stats_rows(full));

  const std::string flags = strprintf(
      "cmd=reproduce experts=23 novices=23 gaze_hz=120 flight_hz=30 combo=aoi_em_qar "
      "proportion=0.65 selector=mic model=svm leak_compat=%d",
      a.c.leak_compat ? 1 : 0);
  write_provenance(a.c.out + "/provenance.txt", make_provenance(a.c.seed, flags));
  write_text(a.c.out + "/summary.md", reproduce_summary(a, full, sweep, grid, abl, tree));
  log_line("summary at " + a.c.out + "/summary.md");
}

void add_out_option(CLI::App* sub, std::string& out, const char* what) {
  sub->add_option("--out", out, what)->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"expert/novice classification from flight-simulator eye and flight logs"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic cohort");
  synth->add_option("--experts", synth_args.experts, "expert participants (default 23)");
  synth->add_option("--novices", synth_args.novices, "novice participants (default 23)");
  synth->add_option("--gaze-hz", synth_args.gaze_hz, "gaze sample rate (default 120)");
  synth->add_option("--flight-hz", synth_args.flight_hz, "flight sample rate (default 30)");
  add_seed_option(synth, synth_args.c.seed);
  add_jobs_option(synth, synth_args.c.jobs);
  add_out_option(synth, synth_args.c.out, "cohort output directory");
  synth->callback([&] { run_synth(synth_args); });

  ExtractArgs extract_args;
  CLI::App* extract = app.add_subcommand("extract", "extract the feature matrix from a cohort");
  extract->add_option("--manifest", extract_args.manifest, "cohort manifest CSV")->required();
  add_jobs_option(extract, extract_args.c.jobs);
  add_out_option(extract, extract_args.c.out, "features output directory");
  extract->callback([&] { run_extract(extract_args); });

  SelectArgs select_args;
  CLI::App* select = app.add_subcommand("select", "rank features and keep the top proportion");
  select->add_option("--features", select_args.features, "features CSV from extract")->required();
  select->add_option("--method", select_args.method, "mic | svmrfe | rf (default mic)");
  select->add_option("--dataset", select_args.dataset, "feature combo (default aoi_em_qar)");
  select->add_option("--proportion", select_args.proportion, "kept proportion (default 0.65)");
  add_seed_option(select, select_args.c.seed);
  add_out_option(select, select_args.c.out, "ranking output directory");
  select->callback([&] { run_select(select_args); });

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train one model on a features CSV");
  train->add_option("--features", train_args.features, "features CSV from extract")->required();
  train->add_option("--model", train_args.model, "svm | knn | lr | lgbm | dtree (default svm)");
  train->add_option("--selector", train_args.selector, "optional pre-training feature selection");
  train->add_option("--dataset", train_args.dataset, "feature combo (default aoi_em_qar)");
  train->add_option("--proportion", train_args.proportion, "kept proportion (default 0.65)");
  add_seed_option(train, train_args.c.seed);
  add_out_option(train, train_args.c.out, "model file path");
  train->callback([&] { run_train(train_args); });

  EvaluateArgs eval_args;
  CLI::App* evaluate = app.add_subcommand("evaluate", "leave-one-out evaluation of one pipeline");
  evaluate->add_option("--features", eval_args.features, "features CSV from extract")->required();
  evaluate->add_option("--selector", eval_args.selector, "mic | svmrfe | rf (default mic)");
  evaluate->add_option("--model", eval_args.model, "svm | knn | lr | lgbm | dtree (default svm)");
  evaluate->add_option("--dataset", eval_args.dataset, "feature combo (default aoi_em_qar)");
  evaluate->add_option("--proportion", eval_args.proportion, "kept proportion (default 0.65)");
  evaluate->add_flag("--leak-compat", eval_args.c.leak_compat, "rank once on the full matrix");
  add_seed_option(evaluate, eval_args.c.seed);
  add_jobs_option(evaluate, eval_args.c.jobs);
  add_out_option(evaluate, eval_args.c.out, "report output directory");
  evaluate->callback([&] { run_evaluate(eval_args); });

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "proportion sweep over all 15 selector x model pairs");
  sweep->add_option("--features", sweep_args.features, "features CSV from extract")->required();
  sweep->add_option("--proportions", sweep_args.proportions,
                    "comma-separated proportions (default 0.15..0.95 step 0.10)")
      ->delimiter(',');
  sweep->add_flag("--leak-compat", sweep_args.c.leak_compat, "rank once on the full matrix");
  add_seed_option(sweep, sweep_args.c.seed);
  add_jobs_option(sweep, sweep_args.c.jobs);
  add_out_option(sweep, sweep_args.c.out, "experiment output directory");
  sweep->callback([&] { run_sweep_into(load_features(sweep_args.features), sweep_args, true); });

  GridArgs grid_args;
  CLI::App* grid = app.add_subcommand("grid", "3 selectors x 5 models at one proportion");
  grid->add_option("--features", grid_args.features, "features CSV from extract")->required();
  grid->add_option("--dataset", grid_args.dataset, "feature combo (default aoi_em_qar)");
  grid->add_option("--proportion", grid_args.proportion, "kept proportion (default 0.65)");
  grid->add_flag("--leak-compat", grid_args.c.leak_compat, "rank once on the full matrix");
  add_seed_option(grid, grid_args.c.seed);
  add_jobs_option(grid, grid_args.c.jobs);
  add_out_option(grid, grid_args.c.out, "experiment output directory");
  grid->callback([&] { run_grid_into(load_features(grid_args.features), grid_args, true); });

  AblateArgs ablate_args;
  CLI::App* ablate = app.add_subcommand("ablate", "evaluate one pipeline on all 7 dataset combos");
  ablate->add_option("--features", ablate_args.features, "features CSV from extract")->required();
  ablate->add_option("--selector", ablate_args.selector, "mic | svmrfe | rf (default mic)");
  ablate->add_option("--model", ablate_args.model, "svm | knn | lr | lgbm | dtree (default svm)");
  ablate->add_option("--proportion", ablate_args.proportion, "kept proportion (default 0.65)");
  ablate->add_flag("--leak-compat", ablate_args.c.leak_compat, "rank once on the full matrix");
  add_seed_option(ablate, ablate_args.c.seed);
  add_jobs_option(ablate, ablate_args.c.jobs);
  add_out_option(ablate, ablate_args.c.out, "experiment output directory");
  ablate->callback([&] { run_ablate_into(load_features(ablate_args.features), ablate_args, true); });

  InterpretArgs interpret_args;
  CLI::App* interpret = app.add_subcommand("interpret", "decision-tree interpretability report");
  interpret->add_option("--features", interpret_args.features, "features CSV from extract")->required();
  interpret->add_option("--proportion", interpret_args.proportion, "kept proportion (default 0.65)");
  interpret->add_flag("--leak-compat", interpret_args.c.leak_compat,
                      "accepted for flag parity; the tree is fit once on the full matrix");
  add_seed_option(interpret, interpret_args.c.seed);
  add_out_option(interpret, interpret_args.c.out, "experiment output directory");
  interpret->callback(
      [&] { run_interpret_into(load_features(interpret_args.features), interpret_args, true); });

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "group statistics (t-test, Cohen's d) per feature");
  stats->add_option("--features", stats_args.features, "features CSV from extract")->required();
  stats->add_option("--feature", stats_args.feature, "print only this feature");
  stats->add_option("--out", stats_args.out, "also write stats.csv into this directory");
  stats->callback([&] { run_stats(stats_args); });

  ReproduceArgs repro_args;
  CLI::App* reproduce = app.add_subcommand("reproduce", "one-shot seeded end-to-end run");
  reproduce->add_flag("--leak-compat", repro_args.c.leak_compat, "rank once on the full matrix");
  add_seed_option(reproduce, repro_args.c.seed);
  add_jobs_option(reproduce, repro_args.c.jobs);
  add_out_option(reproduce, repro_args.c.out, "run output directory");
  reproduce->callback([&] { run_reproduce(repro_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the offending flag
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    log_line(std::string("invalid options: ") + e.what());
    return 1;
  } catch (const DataError& e) {
    log_line(std::string("bad input data: ") + e.what());
    return 2;
  } catch (const std::exception& e) {
    log_line(std::string("error: ") + e.what());
    return 2;
  }
  return 0;
}
