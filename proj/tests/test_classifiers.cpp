#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "skyselect/classifiers.hpp"
#include "skyselect/common.hpp"
#include "skyselect/rng.hpp"

using namespace skyselect;
using testutil::TempDir;
using testutil::make_matrix;

namespace {

// Test-side standardization mirroring the documented training transform:
// (x - mean) / population sd, near-constant columns mapped with scale 1.
std::vector<std::vector<double>> standardize_rows(const FeatureMatrix& m) {
  const size_t n = m.rows(), d = m.cols();
  std::vector<std::vector<double>> out(n, std::vector<double>(d));
  for (size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (size_t r = 0; r < n; ++r) mean += m.at(r, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (size_t r = 0; r < n; ++r) ss += (m.at(r, c) - mean) * (m.at(r, c) - mean);
    double sd = std::sqrt(ss / static_cast<double>(n));
    if (sd < 1e-12) sd = 1.0;
    for (size_t r = 0; r < n; ++r) out[r][c] = (m.at(r, c) - mean) / sd;
  }
  return out;
}

// Exhaustive feasible-grid maximization of the 4-point SVM dual:
// max sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij subject to the box and
// sum a_i y_i = 0. Three free alphas; the fourth is pinned by the constraint.
double grid_dual_best(const std::vector<std::vector<double>>& pts, const std::vector<int>& y01,
                      bool rbf, double gamma, double C, int steps) {
  REQUIRE(pts.size() == 4);
  double K[4][4];
  int y[4];
  for (int i = 0; i < 4; ++i) y[i] = y01[i] == 1 ? 1 : -1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (rbf) {
        double ss = 0.0;
        for (size_t c = 0; c < pts[i].size(); ++c) {
          const double dx = pts[i][c] - pts[j][c];
          ss += dx * dx;
        }
        K[i][j] = std::exp(-gamma * ss);
      } else {
        double dp = 0.0;
        for (size_t c = 0; c < pts[i].size(); ++c) dp += pts[i][c] * pts[j][c];
        K[i][j] = dp;
      }
    }
  const double step = C / steps;
  double best = 0.0;
  double a[4];
  for (int i0 = 0; i0 <= steps; ++i0) {
    a[0] = i0 * step;
    for (int i1 = 0; i1 <= steps; ++i1) {
      a[1] = i1 * step;
      for (int i2 = 0; i2 <= steps; ++i2) {
        a[2] = i2 * step;
        // Solve the equality constraint for a[3].
        const double partial = a[0] * y[0] + a[1] * y[1] + a[2] * y[2];
        a[3] = -partial * y[3];
        if (a[3] < -1e-12 || a[3] > C + 1e-12) continue;
        double w = a[0] + a[1] + a[2] + a[3];
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) w -= 0.5 * a[i] * a[j] * y[i] * y[j] * K[i][j];
        best = std::max(best, w);
      }
    }
  }
  return best;
}

void check_dual_against_grid(const std::vector<std::vector<double>>& rows,
                             const std::vector<int>& labels, SvmOptions::Kernel kernel) {
  FeatureMatrix m = make_matrix(rows, labels);
  SvmOptions opts;
  opts.kernel = kernel;
  auto model = SvmModel::train(m, opts);
  const bool rbf = kernel == SvmOptions::Kernel::kRbf;
  const double grid =
      grid_dual_best(standardize_rows(m), labels, rbf, model->gamma_value(), opts.C, 200);
  CHECK(std::fabs(model->dual_objective() - grid) <= 1e-3);
  CHECK(model->max_kkt_violation() <= 1e-3 + 1e-12);
  CHECK(std::fabs(model->sum_alpha_y()) <= 1e-6);

  // Independent KKT residuals from the model's own margins.
  for (size_t i = 0; i < rows.size(); ++i) {
    const double margin = (labels[i] == 1 ? 1.0 : -1.0) * model->score(rows[i]);
    const double alpha = model->alpha()[i];
    if (alpha <= 1e-12) CHECK(margin >= 1.0 - 1e-3 - 1e-9);
    else if (alpha >= opts.C - 1e-12) CHECK(margin <= 1.0 + 1e-3 + 1e-9);
    else CHECK(std::fabs(margin - 1.0) <= 1e-3 + 1e-9);
  }
}

}  // namespace

TEST_CASE("svm: smo dual matches a brute-force grid on 4-point sets") {
  // Separable pair of columns, margin 2 apart.
  check_dual_against_grid({{-2, 0}, {-2, 1}, {2, 0}, {2, 1}}, {0, 0, 1, 1},
                          SvmOptions::Kernel::kRbf);
  check_dual_against_grid({{-2, 0}, {-2, 1}, {2, 0}, {2, 1}}, {0, 0, 1, 1},
                          SvmOptions::Kernel::kLinear);
  // Exclusive-or corners, only separable through the kernel.
  check_dual_against_grid({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, {1, 1, 0, 0},
                          SvmOptions::Kernel::kRbf);
  // Overlapping cloud.
  check_dual_against_grid({{0.2, -0.3}, {0.1, 0.4}, {-0.2, 0.1}, {0.4, 0.2}}, {1, 0, 1, 0},
                          SvmOptions::Kernel::kRbf);
}

TEST_CASE("svm: separable set trains to accuracy 1") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    rows.push_back({(lab ? 5.0 : -5.0) + rng.normal(), rng.normal()});
  }
  FeatureMatrix m = make_matrix(rows, labels);
  auto model = SvmModel::train(m, {});
  for (size_t i = 0; i < rows.size(); ++i) CHECK(model->predict(rows[i]) == labels[i]);
}

TEST_CASE("svm: symmetric pairs give zero bias") {
  FeatureMatrix m =
      make_matrix({{-1, 0}, {-1, 0}, {1, 0}, {1, 0}}, {0, 0, 1, 1});
  auto model = SvmModel::train(m, {});
  CHECK(std::fabs(model->bias()) <= 1e-6);
  CHECK(std::fabs(model->score({0.0, 0.0})) <= 1e-6);
  CHECK(model->predict({0.5, 0.0}) == 1);
  CHECK(model->predict({-0.5, 0.0}) == 0);
}

TEST_CASE("svm: dual feasibility on random sets") {
  Rng rng(29);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 14; ++i) {
      const int lab = i % 2;
      labels.push_back(lab);
      rows.push_back({rng.normal(lab, 1.2), rng.normal(), rng.normal(-0.5 * lab, 1.0)});
    }
    FeatureMatrix m = make_matrix(rows, labels);
    auto model = SvmModel::train(m, {});
    CHECK(std::fabs(model->sum_alpha_y()) <= 1e-6);
    CHECK(model->max_kkt_violation() <= 1e-3 + 1e-12);
    for (double a : model->alpha()) {
      CHECK(a >= -1e-12);
      CHECK(a <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("knn: a k=1 query on a training row returns that row's label") {
  FeatureMatrix m = make_matrix({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 2}, {3, 3}},
                                {0, 1, 0, 1, 0, 1});
  KnnOptions opts;
  opts.k = 1;
  auto model = KnnModel::train(m, opts);
  for (size_t i = 0; i < m.rows(); ++i) {
    std::vector<double> row = {m.at(i, 0), m.at(i, 1)};
    CHECK(model->predict(row) == m.labels[i]);
  }
}

TEST_CASE("knn: exact vote ties resolve to class 0") {
  FeatureMatrix m = make_matrix({{-1, 0}, {1, 0}}, {0, 1});
  KnnOptions opts;
  opts.k = 2;
  auto model = KnnModel::train(m, opts);
  CHECK(model->score({0.0, 0.0}) == doctest::Approx(0.5));
  CHECK(model->predict({0.0, 0.0}) == 0);
}

TEST_CASE("knn: k is capped at the training size") {
  FeatureMatrix m = make_matrix({{0.0}, {1.0}, {2.0}}, {0, 1, 1});
  KnnOptions opts;
  opts.k = 50;
  auto model = KnnModel::train(m, opts);
  CHECK(model->score({5.0}) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("logreg: uninformative feature converges to probability one half") {
  FeatureMatrix m = make_matrix({{-1}, {1}, {-1}, {1}}, {0, 0, 1, 1});
  auto model = LogRegModel::train(m, {});
  CHECK(std::fabs(model->score({-1.0}) - 0.5) < 1e-3);
  CHECK(std::fabs(model->score({1.0}) - 0.5) < 1e-3);
}

TEST_CASE("logreg: analytic gradient matches central differences") {
  Rng rng(61);
  for (int instance = 0; instance < 20; ++instance) {
    const size_t n = 5 + static_cast<size_t>(rng.uniform() * 25);
    const size_t d = 1 + static_cast<size_t>(rng.uniform() * 9);
    std::vector<double> X(n * d);
    for (double& v : X) v = rng.normal();
    std::vector<int> y(n);
    for (int& v : y) v = rng.uniform() < 0.5 ? 0 : 1;
    std::vector<double> w(d);
    for (double& v : w) v = rng.normal(0.0, 0.8);
    const double b = rng.normal(0.0, 0.5);
    const double lambda = 0.25 + rng.uniform() * 2.0;

    std::vector<double> grad;
    logreg_objective(X, n, d, y, w, b, lambda, &grad);
    REQUIRE(grad.size() == d + 1);

    auto eval = [&](const std::vector<double>& wv, double bv) {
      return logreg_objective(X, n, d, y, wv, bv, lambda, nullptr);
    };
    for (size_t j = 0; j <= d; ++j) {
      const double h = 1e-5;
      double fp, fm;
      if (j < d) {
        std::vector<double> wp = w, wm = w;
        wp[j] += h;
        wm[j] -= h;
        fp = eval(wp, b);
        fm = eval(wm, b);
      } else {
        fp = eval(w, b + h);
        fm = eval(w, b - h);
      }
      const double fd = (fp - fm) / (2.0 * h);
      const double rel = std::fabs(grad[j] - fd) / std::max(1.0, std::fabs(grad[j]));
      CHECK(rel < 1e-5);
    }
  }
}

TEST_CASE("logreg: separable data converges with small gradient") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  Rng rng(71);
  for (int i = 0; i < 16; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    rows.push_back({(lab ? 2.0 : -2.0) + 0.3 * rng.normal()});
  }
  FeatureMatrix m = make_matrix(rows, labels);
  auto model = LogRegModel::train(m, {});
  for (size_t i = 0; i < rows.size(); ++i) CHECK(model->predict(rows[i]) == labels[i]);
  CHECK(model->iterations() < 1000);
}

TEST_CASE("dtree: feature equal to the label yields one split of full importance") {
  FeatureMatrix m = make_matrix({{0, 3}, {1, 3}, {0, 3}, {1, 3}}, {0, 1, 0, 1});
  auto model = DtreeModel::train(m, {});
  REQUIRE(model->nodes().size() == 3);
  const TreeNode& root = model->nodes()[0];
  CHECK(root.feature == 0);
  CHECK(root.threshold == doctest::Approx(0.5));
  CHECK(root.gini == doctest::Approx(0.5));
  std::vector<double> imp = model->importances();
  CHECK(imp[0] == doctest::Approx(1.0));
  CHECK(imp[1] == doctest::Approx(0.0));
  for (size_t i = 0; i < m.rows(); ++i)
    CHECK(model->predict({m.at(i, 0), m.at(i, 1)}) == m.labels[i]);
}

TEST_CASE("dtree: pure nodes have zero gini") {
  FeatureMatrix m = make_matrix({{0.0}, {1.0}}, {0, 1});
  auto model = DtreeModel::train(m, {});
  REQUIRE(model->nodes().size() == 3);
  for (const TreeNode& node : model->nodes())
    if (node.feature < 0) {
      CHECK(node.gini == 0.0);
      CHECK((node.value == 0.0 || node.value == 1.0));
    }
}

TEST_CASE("dtree: consistent data is fit to accuracy 1") {
  Rng rng(83);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 24; ++i) {
    rows.push_back({rng.normal(), rng.normal(), rng.normal()});
    labels.push_back(rng.uniform() < 0.5 ? 0 : 1);
  }
  FeatureMatrix m = make_matrix(rows, labels);
  auto model = DtreeModel::train(m, {});
  for (size_t i = 0; i < rows.size(); ++i) CHECK(model->predict(rows[i]) == labels[i]);
  std::vector<double> imp = model->importances();
  double sum = 0.0;
  for (double v : imp) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("dtree: equal splits break toward the lower feature index") {
  FeatureMatrix m = make_matrix({{0, 0, 9}, {1, 1, 8}, {0, 0, 7}, {1, 1, 6}}, {0, 1, 0, 1});
  auto model = DtreeModel::train(m, {});
  CHECK(model->nodes()[0].feature == 0);
}

TEST_CASE("gbm: too few rows for a split degenerates to the class prior") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) {
    rows.push_back({static_cast<double>(i)});
    labels.push_back(i < 6 ? 1 : 0);
  }
  FeatureMatrix m = make_matrix(rows, labels);
  auto model = GbmModel::train(m, {});  // min_leaf 20 by default
  CHECK(model->base_score() == doctest::Approx(std::log(0.6 / 0.4)).epsilon(1e-12));
  for (const auto& row : rows) CHECK(model->score(row) == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("gbm: separable data with enough rows trains to accuracy 1") {
  Rng rng(97);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    rows.push_back({(lab ? 1.0 : -1.0) + 0.1 * rng.normal(), rng.normal()});
  }
  FeatureMatrix m = make_matrix(rows, labels);
  auto model = GbmModel::train(m, {});
  CHECK(model->tree_count() > 0);
  for (size_t i = 0; i < rows.size(); ++i) CHECK(model->predict(rows[i]) == labels[i]);
}

TEST_CASE("classifiers: swapping the labels flips every model's scores") {
  Rng rng(103);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels, flipped;
  for (int i = 0; i < 30; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    flipped.push_back(1 - lab);
    rows.push_back({rng.normal(lab, 1.0), rng.normal(), rng.normal(0.5 * lab, 2.0)});
  }
  FeatureMatrix m = make_matrix(rows, labels);
  FeatureMatrix swapped = m;
  swapped.labels = flipped;

  TrainOptions opts;
  opts.svm.tol = 1e-10;  // near the optimum the flip symmetry is exact
  for (ModelKind kind : all_model_kinds()) {
    auto a = train_model(kind, m, opts);
    auto b = train_model(kind, swapped, opts);
    for (size_t i = 0; i < rows.size(); ++i) {
      const double sa = a->score(rows[i]), sb = b->score(rows[i]);
      CAPTURE(model_kind_name(kind));
      if (kind == ModelKind::kSvm) CHECK(std::fabs(sa + sb) < 1e-6);
      else if (kind == ModelKind::kLogReg) CHECK(std::fabs(sa + sb - 1.0) < 1e-3);
      else CHECK(std::fabs(sa + sb - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("classifiers: training-row order does not change predictions") {
  Rng rng(107);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 24; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    rows.push_back({rng.normal(lab, 1.0), rng.normal(), rng.normal()});
  }
  FeatureMatrix m = make_matrix(rows, labels);
  std::vector<size_t> perm = {5, 17, 0, 9, 3, 21, 12, 7, 23, 14, 1, 18,
                              10, 6, 20, 2, 15, 8, 22, 11, 4, 19, 13, 16};
  FeatureMatrix shuffled = m.select_rows(perm);

  TrainOptions opts;
  opts.svm.tol = 1e-10;  // row order only perturbs scores through the stopping slack
  std::vector<std::vector<double>> probes;
  for (int i = 0; i < 8; ++i) probes.push_back({rng.normal(), rng.normal(), rng.normal()});
  for (ModelKind kind : all_model_kinds()) {
    auto a = train_model(kind, m, opts);
    auto b = train_model(kind, shuffled, opts);
    for (const auto& p : probes) {
      CAPTURE(model_kind_name(kind));
      CHECK(std::fabs(a->score(p) - b->score(p)) < 1e-6);
    }
  }
}

TEST_CASE("classifiers: save and load preserve predictions exactly") {
  Rng rng(109);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    rows.push_back({rng.normal(lab, 1.0), rng.normal(3.0, 2.0), rng.normal()});
  }
  FeatureMatrix m = make_matrix(rows, labels, {"aoi.attitude_indicator", "em.fixation_count",
                                               "qar.slide_length"});
  TempDir dir("modelio");
  TrainOptions opts;
  for (ModelKind kind : all_model_kinds()) {
    auto model = train_model(kind, m, opts);
    const std::string path = dir.str(model_kind_name(kind) + ".model");
    save_model_file(path, *model, m.columns);
    LoadedModel back = load_model_file(path);
    CHECK(back.model->kind() == kind);
    CHECK(back.columns == m.columns);
    for (int p = 0; p < 10; ++p) {
      std::vector<double> probe = {rng.normal(), rng.normal(3.0, 2.0), rng.normal()};
      CHECK(model->score(probe) == back.model->score(probe));
    }
  }
}

TEST_CASE("classifiers: model names parse") {
  for (ModelKind kind : all_model_kinds()) CHECK(parse_model_kind(model_kind_name(kind)) == kind);
  CHECK(parse_model_kind("lgbm") == ModelKind::kGbm);
  CHECK(parse_model_kind("lr") == ModelKind::kLogReg);
  CHECK_THROWS_AS(parse_model_kind("perceptron"), ValidationError);
}
