#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "skyselect/common.hpp"
#include "skyselect/feature_select.hpp"
#include "skyselect/rng.hpp"

using namespace skyselect;
using testutil::make_matrix;

namespace {

// Independent oracle: apply the documented equal-frequency binning, histogram
// the joint, and evaluate H(X) + H(Y) - H(X,Y) directly.
std::vector<int> oracle_bins(const std::vector<double>& x, size_t max_bins) {
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  size_t distinct = 1;
  for (size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] != sorted[i - 1]) ++distinct;
  const size_t B = std::min(max_bins, distinct);
  std::vector<double> cuts;
  for (size_t k = 1; k < B; ++k) {
    double c = sorted[k * sorted.size() / B];
    if (cuts.empty() || c != cuts.back()) cuts.push_back(c);
  }
  std::vector<int> bins(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    int b = 0;
    for (double c : cuts)
      if (c <= x[i]) ++b;
    bins[i] = b;
  }
  return bins;
}

double entropy_of(const std::map<int, size_t>& counts, size_t n) {
  double h = 0.0;
  for (const auto& [_, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

double oracle_mi(const std::vector<double>& x, const std::vector<double>& y, size_t bins) {
  const std::vector<int> bx = oracle_bins(x, bins), by = oracle_bins(y, bins);
  std::map<int, size_t> cx, cy;
  std::map<std::pair<int, int>, size_t> cxy;
  for (size_t i = 0; i < x.size(); ++i) {
    ++cx[bx[i]];
    ++cy[by[i]];
    ++cxy[{bx[i], by[i]}];
  }
  const size_t n = x.size();
  double hx = entropy_of(cx, n), hy = entropy_of(cy, n);
  double hxy = 0.0;
  for (const auto& [_, c] : cxy) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    hxy -= p * std::log(p);
  }
  return hx + hy - hxy;
}

}  // namespace

TEST_CASE("select: binned mutual information matches the entropy identity on small tables") {
  // Exhaustive 5x2 tables with cell counts in {0,1,2}, enumerated compactly:
  // x takes values 0..4, y is 0/1, cells (v, y) hold the replication count.
  size_t tested = 0;
  for (unsigned mask = 0; mask < 59049; mask += 7) {  // base-3 digits, stride keeps it quick
    unsigned m = mask;
    std::vector<double> x, y;
    for (int v = 0; v < 5; ++v) {
      for (int lab = 0; lab < 2; ++lab) {
        const unsigned count = m % 3;
        m /= 3;
        for (unsigned r = 0; r < count; ++r) {
          x.push_back(static_cast<double>(v));
          y.push_back(static_cast<double>(lab));
        }
      }
    }
    if (x.size() < 2) continue;
    ++tested;
    const double got = mutual_information_binned(x, y, 5);
    const double want = oracle_mi(x, y, 5);
    REQUIRE(std::fabs(got - want) < 1e-9);
    REQUIRE(got >= -1e-12);
  }
  CHECK(tested > 5000);
}

TEST_CASE("select: self information equals entropy") {
  // Five distinct equally frequent values: H = ln 5.
  std::vector<double> x;
  for (int v = 0; v < 5; ++v)
    for (int r = 0; r < 4; ++r) x.push_back(static_cast<double>(v));
  CHECK(std::fabs(mutual_information_binned(x, x, 5) - std::log(5.0)) < 1e-9);
}

TEST_CASE("select: constant series carries no information") {
  std::vector<double> c(20, 3.14), y;
  for (int i = 0; i < 20; ++i) y.push_back(i % 2);
  CHECK(mutual_information_binned(c, y, 5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("select: a 0.4/0.1 diagonal joint gives mi near 0.1928 nats") {
  // Joint [[0.4, 0.1], [0.1, 0.4]] over 20 rows.
  std::vector<double> x, y;
  auto add = [&](double xv, double yv, int n) {
    for (int i = 0; i < n; ++i) {
      x.push_back(xv);
      y.push_back(yv);
    }
  };
  add(0, 0, 8);
  add(0, 1, 2);
  add(1, 0, 2);
  add(1, 1, 8);
  const double expected = 2.0 * std::log(2.0) -
                          (-(0.8 * std::log(0.4) + 0.2 * std::log(0.1)));
  CHECK(std::fabs(mutual_information_binned(x, y, 5) - expected) < 1e-12);
  CHECK(expected == doctest::Approx(0.19274).epsilon(1e-3));
}

TEST_CASE("select: label copy ranks first, constant ranks last") {
  Rng rng(11);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 24; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    rows.push_back({rng.normal(), static_cast<double>(lab), 7.5, rng.normal()});
  }
  FeatureMatrix m = make_matrix(rows, labels, {"noise_a", "copy", "constant", "noise_b"});
  RankedFeatures r = mic_rank(m);
  REQUIRE(r.order.size() == 4);
  CHECK(r.names[0] == "copy");
  CHECK(r.scores[0] == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(r.names[3] == "constant");
  CHECK(r.scores[3] == doctest::Approx(0.0));
}

TEST_CASE("select: mutual information is symmetric and bounded") {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> x, y;
    for (int i = 0; i < 30; ++i) {
      x.push_back(rng.normal());
      y.push_back(std::floor(rng.uniform() * 3));
    }
    const double xy = mutual_information_binned(x, y, 5);
    const double yx = mutual_information_binned(y, x, 5);
    CHECK(std::fabs(xy - yx) < 1e-12);
    const double hx = oracle_mi(x, x, 5), hy = oracle_mi(y, y, 5);
    CHECK(xy >= -1e-12);
    CHECK(xy <= std::min(hx, hy) + 1e-12);
  }
}

TEST_CASE("select: ranking is invariant to monotone transforms") {
  Rng rng(17);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    rows.push_back({rng.normal(lab, 1.0), rng.normal(), rng.normal(2.0 * lab, 0.5)});
  }
  FeatureMatrix m = make_matrix(rows, labels);
  FeatureMatrix warped = m;
  for (size_t r = 0; r < warped.rows(); ++r)
    for (size_t c = 0; c < warped.cols(); ++c) warped.at(r, c) = std::exp(warped.at(r, c));
  RankedFeatures a = mic_rank(m), b = mic_rank(warped);
  CHECK(a.order == b.order);
  for (size_t i = 0; i < a.scores.size(); ++i)
    CHECK(std::fabs(a.scores[i] - b.scores[i]) < 1e-12);
}

TEST_CASE("select: rfe keeps the label copy to the end") {
  Rng rng(3);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    rows.push_back({rng.normal() * 0.1, static_cast<double>(lab * 2 - 1) + 0.01 * rng.normal(),
                    rng.normal() * 0.1});
  }
  FeatureMatrix m = make_matrix(rows, labels, {"n1", "signal", "n2"});
  RankedFeatures r = svm_rfe_rank(m);
  CHECK(r.names[0] == "signal");
  // Scores are 1-based elimination positions, best eliminated last.
  CHECK(r.scores[0] == doctest::Approx(3.0));
  CHECK(r.method == "svmrfe");
}

TEST_CASE("select: rfe on one feature gives rank 1") {
  FeatureMatrix m = make_matrix({{0.0}, {1.0}, {0.1}, {0.9}}, {0, 1, 0, 1}, {"only"});
  RankedFeatures r = svm_rfe_rank(m);
  REQUIRE(r.order.size() == 1);
  CHECK(r.order[0] == 0);
  CHECK(r.scores[0] == doctest::Approx(1.0));
}

TEST_CASE("select: duplicated informative column ranks in registry order") {
  Rng rng(9);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    const double sig = static_cast<double>(lab * 2 - 1) + 0.01 * rng.normal();
    rows.push_back({sig, sig, rng.normal() * 0.05});
  }
  FeatureMatrix m = make_matrix(rows, labels, {"dup_a", "dup_b", "noise"});
  RankedFeatures r = svm_rfe_rank(m);
  // The twins share their weight; elimination drops the higher index first,
  // so the lower index ends ranked above its twin.
  CHECK(r.order[0] == 0);
  CHECK(r.order[1] == 1);
}

TEST_CASE("select: forest importance singles out the label copy") {
  Rng rng(23);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    rows.push_back({rng.normal(), static_cast<double>(lab), rng.normal(), rng.normal()});
  }
  FeatureMatrix m = make_matrix(rows, labels, {"a", "copy", "b", "c"});
  RankedFeatures r = rf_rank(m, 7, 50);
  CHECK(r.names[0] == "copy");
  CHECK(r.scores[0] > r.scores[1]);
}

TEST_CASE("select: forest on all-constant features returns zero scores in registry order") {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) {
    labels.push_back(i % 2);
    rows.push_back({1.0, 2.0, 3.0});
  }
  FeatureMatrix m = make_matrix(rows, labels);
  RankedFeatures r = rf_rank(m, 7, 25);
  CHECK(r.order == std::vector<size_t>{0, 1, 2});
  for (double s : r.scores) CHECK(s == 0.0);
}

TEST_CASE("select: forest ranking is deterministic in the seed") {
  Rng rng(31);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 26; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    rows.push_back({rng.normal(lab, 1.5), rng.normal(), rng.normal(-lab, 2.0), rng.normal()});
  }
  FeatureMatrix m = make_matrix(rows, labels);
  RankedFeatures a = rf_rank(m, 99, 40), b = rf_rank(m, 99, 40);
  CHECK(a.order == b.order);
  CHECK(a.scores == b.scores);
  RankedFeatures c = rf_rank(m, 100, 40);
  CHECK((c.order != a.order || c.scores != a.scores));
}

TEST_CASE("select: rankings are permutations of the columns") {
  Rng rng(41);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 18; ++i) {
    const int lab = i % 2;
    labels.push_back(lab);
    rows.push_back({rng.normal(lab, 1.0), rng.normal(), rng.normal(), rng.normal(), rng.normal()});
  }
  FeatureMatrix m = make_matrix(rows, labels);
  for (SelectorKind kind : all_selector_kinds()) {
    RankedFeatures r = rank_features(kind, m, 7);
    std::vector<size_t> sorted = r.order;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<size_t>{0, 1, 2, 3, 4});
    REQUIRE(r.scores.size() == 5);
    for (size_t i = 0; i + 1 < r.scores.size(); ++i) {
      CHECK(r.scores[i] >= r.scores[i + 1]);
      if (r.scores[i] == r.scores[i + 1]) CHECK(r.order[i] < r.order[i + 1]);
    }
  }
}

TEST_CASE("select: top-k arithmetic") {
  CHECK(select_top_count(70, 0.10) == 7);
  CHECK(select_top_count(65, 0.65) == 42);
  CHECK(select_top_count(63, 1.0) == 63);
  CHECK(select_top_count(63, 0.001) == 1);  // floor would give 0; clamped to 1
  CHECK(select_top_count(63, 0.15) == 9);
  CHECK_THROWS_AS(select_top_count(63, 0.0), ValidationError);
  CHECK_THROWS_AS(select_top_count(63, 1.1), ValidationError);
  CHECK_THROWS_AS(select_top_count(63, -0.2), ValidationError);
}

TEST_CASE("select: selected columns come back in ascending registry order") {
  RankedFeatures r;
  r.order = {4, 0, 3, 1, 2};
  r.names = {"e", "a", "d", "b", "c"};
  r.scores = {5, 4, 3, 2, 1};
  CHECK(select_top(r, 3) == std::vector<size_t>{0, 3, 4});
  CHECK(select_top(r, 1) == std::vector<size_t>{4});
  CHECK(select_top(r, 5) == std::vector<size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("select: selector names parse") {
  CHECK(parse_selector("mic") == SelectorKind::kMic);
  CHECK(parse_selector("svm-rfe") == SelectorKind::kSvmRfe);
  CHECK(parse_selector("svm_rfe") == SelectorKind::kSvmRfe);
  CHECK(parse_selector("rf") == SelectorKind::kRandomForest);
  CHECK_THROWS_AS(parse_selector("pca"), ValidationError);
  for (SelectorKind k : all_selector_kinds()) CHECK(parse_selector(selector_name(k)) == k);
}
