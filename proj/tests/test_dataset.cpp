#include <cmath>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "skyselect/common.hpp"
#include "skyselect/dataset.hpp"
#include "skyselect/registry.hpp"

using namespace skyselect;
using testutil::TempDir;
using testutil::make_matrix;
using testutil::read_file;

TEST_CASE("registry: 63 features in three groups") {
  const FeatureRegistry& reg = FeatureRegistry::instance();
  CHECK(reg.size() == 63);
  CHECK(reg.count(DatasetCombo::kAoi) == 19);
  CHECK(reg.count(DatasetCombo::kEm) == 7);
  CHECK(reg.count(DatasetCombo::kQar) == 37);
  CHECK(reg.count(DatasetCombo::kAoiEm) == 26);
  CHECK(reg.count(DatasetCombo::kAoiQar) == 56);
  CHECK(reg.count(DatasetCombo::kEmQar) == 44);
  CHECK(reg.count(DatasetCombo::kAll) == 63);
  CHECK(reg.digest() != 0);
}

TEST_CASE("registry: names resolve to indices and back") {
  const FeatureRegistry& reg = FeatureRegistry::instance();
  for (size_t i = 0; i < reg.size(); ++i)
    CHECK(reg.index_of(reg.features()[i].name) == i);
  CHECK_THROWS_AS(reg.index_of("qar.warp_drive"), ValidationError);
  // Spot checks on canonical ordering: dwell shares, then eye movement, then
  // flight dynamics.
  CHECK(reg.features()[0].name == "aoi.aircraft_clocks");
  CHECK(reg.features()[19].group == FeatureGroup::kEm);
  CHECK(reg.features()[26].group == FeatureGroup::kQar);
  CHECK(reg.features()[62].name == "qar.total_flight_time");
}

TEST_CASE("registry: combo parsing accepts group order and separators") {
  CHECK(parse_combo("aoi_em_qar") == DatasetCombo::kAll);
  CHECK(parse_combo("AOI&QAR") == DatasetCombo::kAoiQar);
  CHECK(parse_combo("qar+aoi") == DatasetCombo::kAoiQar);
  CHECK(parse_combo("em") == DatasetCombo::kEm);
  CHECK_THROWS_AS(parse_combo("telepathy"), ValidationError);
  for (DatasetCombo c : all_combos()) CHECK(parse_combo(combo_name(c)) == c);
}

TEST_CASE("dataset: combo restriction keeps registry order") {
  const FeatureRegistry& reg = FeatureRegistry::instance();
  FeatureMatrix full;
  full.columns = reg.names(DatasetCombo::kAll);
  full.ids = {"a", "b"};
  full.labels = {1, 0};
  full.values.resize(2 * 63);
  for (size_t r = 0; r < 2; ++r)
    for (size_t c = 0; c < 63; ++c) full.at(r, c) = static_cast<double>(100 * r + c);

  FeatureMatrix em = matrix_for_combo(full, DatasetCombo::kEm);
  CHECK(em.cols() == 7);
  CHECK(em.columns.front() == "em.sd_fix_x");
  CHECK(em.at(1, 0) == doctest::Approx(119.0));

  FeatureMatrix aq = matrix_for_combo(full, DatasetCombo::kAoiQar);
  CHECK(aq.cols() == 56);
  CHECK(aq.columns[0] == "aoi.aircraft_clocks");
  CHECK(aq.columns[19] == "qar.ldg_time");
}

TEST_CASE("dataset: impute replaces missing cells with column means") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  FeatureMatrix m = make_matrix({{1.0, 5.0}, {3.0, nan}, {nan, 7.0}}, {0, 1, 0});
  size_t n = impute_missing(m);
  CHECK(n == 2);
  CHECK(m.at(1, 1) == doctest::Approx(6.0));
  CHECK(m.at(2, 0) == doctest::Approx(2.0));

  FeatureMatrix all_missing = make_matrix({{nan}, {nan}}, {0, 1});
  CHECK_THROWS_AS(impute_missing(all_missing), DataError);
}

TEST_CASE("dataset: features csv round trip") {
  TempDir dir("featcsv");
  FeatureMatrix m = make_matrix({{1.25, -3.5e-4, 902.32}, {0.0, 12345.678, -0.001}}, {1, 0},
                                {"aoi.attitude_indicator", "em.fixation_count", "qar.slide_length"});
  write_features_csv(dir.str("features.csv"), m);
  FeatureMatrix back = read_features_csv(dir.str("features.csv"));
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK(back.ids == m.ids);
  CHECK(back.labels == m.labels);
  CHECK(back.columns == m.columns);
  for (size_t r = 0; r < 2; ++r)
    for (size_t c = 0; c < 3; ++c) CHECK(back.at(r, c) == m.at(r, c));

  // A second write of the parsed matrix is byte-identical (9 digit quantization
  // is a fixed point).
  write_features_csv(dir.str("again.csv"), back);
  CHECK(read_file(dir.str("again.csv")) == read_file(dir.str("features.csv")));
}

TEST_CASE("dataset: row and column selection") {
  FeatureMatrix m = make_matrix({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}, {0, 1, 0});
  FeatureMatrix cols = m.select_columns({0, 2});
  CHECK(cols.cols() == 2);
  CHECK(cols.at(1, 1) == 6.0);
  CHECK(cols.columns[1] == "f2");

  FeatureMatrix rows = m.select_rows({2, 0});
  CHECK(rows.rows() == 2);
  CHECK(rows.ids[0] == "p2");
  CHECK(rows.labels[0] == 0);
  CHECK(rows.at(0, 1) == 8.0);

  CHECK(m.column_index("f1") == 1);
  CHECK_THROWS_AS(m.column_index("f9"), ValidationError);

  CHECK(m.has_both_classes());
  FeatureMatrix one = m.select_rows({0});
  CHECK(!one.has_both_classes());
}
