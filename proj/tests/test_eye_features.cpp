#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "skyselect/common.hpp"
#include "skyselect/eye_features.hpp"

using namespace skyselect;
using testutil::constant_gaze;
using testutil::dir_deg;
using testutil::gaze_at;

TEST_CASE("eye: constant direction for 300 ms at 100 Hz is one fixation") {
  GazeStream g = constant_gaze(31, 0.01, dir_deg(0.0));
  FixationResult r = detect_fixations(g);
  REQUIRE(r.fixations.size() == 1);
  CHECK(r.fixations[0].duration() == doctest::Approx(0.30).epsilon(1e-12));
  CHECK(r.fixations[0].start == 0.0);
  CHECK(r.saccade_count == 0);
}

TEST_CASE("eye: fixation, instantaneous 5 degree jump, fixation gives two fixations") {
  GazeStream g;
  for (int i = 0; i <= 30; ++i) g.push_back(gaze_at(i * 0.01, dir_deg(0.0)));
  for (int i = 31; i <= 61; ++i) g.push_back(gaze_at(i * 0.01, dir_deg(5.0)));
  FixationResult r = detect_fixations(g);
  REQUIRE(r.fixations.size() == 2);
  CHECK(r.fixations[0].duration() == doctest::Approx(0.30).epsilon(1e-12));
  CHECK(r.fixations[1].duration() == doctest::Approx(0.30).epsilon(1e-12));
  CHECK(r.saccade_count == 1);
}

TEST_CASE("eye: slow constant sweep stays one fixation") {
  // 10 deg/s for 1 s at 100 Hz: every pair moves 0.1 deg in 10 ms.
  GazeStream g;
  for (int i = 0; i <= 100; ++i) g.push_back(gaze_at(i * 0.01, dir_deg(0.1 * i)));
  FixationResult r = detect_fixations(g);
  REQUIRE(r.fixations.size() == 1);
  CHECK(r.fixations[0].duration() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eye: fast sweep yields no fixations") {
  // 50 deg/s, well above the 30 deg/s threshold.
  GazeStream g;
  for (int i = 0; i <= 100; ++i) g.push_back(gaze_at(i * 0.01, dir_deg(0.5 * i)));
  FixationResult r = detect_fixations(g);
  CHECK(r.fixations.empty());
  CHECK(r.saccade_count == 0);
}

TEST_CASE("eye: candidates shorter than the minimum duration are dropped") {
  // 50 ms steady run (6 samples) below the 60 ms minimum.
  GazeStream g;
  for (int i = 0; i <= 5; ++i) g.push_back(gaze_at(i * 0.01, dir_deg(0.0)));
  for (int i = 6; i <= 11; ++i) g.push_back(gaze_at(i * 0.01, dir_deg(7.0 * (i - 5))));
  FixationResult r = detect_fixations(g);
  CHECK(r.fixations.empty());
}

TEST_CASE("eye: zero-norm directions are skipped and counted") {
  GazeStream g = constant_gaze(31, 0.01, dir_deg(0.0));
  g[10].dir_left = {0.0, 0.0, 0.0};
  FixationResult r = detect_fixations(g);
  CHECK(r.skipped_samples == 1);
  REQUIRE(r.fixations.size() == 1);
  CHECK(r.fixations[0].duration() == doctest::Approx(0.30).epsilon(1e-12));
}

TEST_CASE("eye: fewer than two usable samples give an empty result") {
  GazeStream g;
  g.push_back(gaze_at(0.0, dir_deg(0.0)));
  FixationResult r = detect_fixations(g);
  CHECK(r.fixations.empty());
  CHECK(detect_fixations(GazeStream{}).fixations.empty());
}

TEST_CASE("eye: fixation count equals saccade count plus one on fixation-rich traces") {
  GazeStream g;
  double t = 0.0;
  for (int block = 0; block < 5; ++block) {
    for (int i = 0; i < 20; ++i, t += 0.01) g.push_back(gaze_at(t, dir_deg(block * 20.0)));
  }
  FixationResult r = detect_fixations(g);
  REQUIRE(r.fixations.size() == 5);
  CHECK(r.saccade_count == r.fixations.size() - 1);
}

TEST_CASE("eye: identical samples give zero spread and zero transitions") {
  GazeStream g = constant_gaze(50, 0.01, dir_deg(12.0), 0.0, Aoi::kAttitudeIndicator);
  EmFeatures em = extract_em_features(g);
  CHECK(em.sd_fix_x == 0.0);
  CHECK(em.sd_fix_y == 0.0);
  CHECK(em.sd_fix_z == 0.0);
  CHECK(em.aoi_transition_freq == 0.0);
  CHECK(em.fixation_count == 1.0);
}

TEST_CASE("eye: eye opening mean of all-open samples is 1") {
  GazeStream g = constant_gaze(20, 0.01, dir_deg(0.0));
  EmFeatures em = extract_em_features(g);
  CHECK(em.eye_opening_mean == doctest::Approx(1.0));
}

TEST_CASE("eye: aoi sequence A,A,B,B,A over 4 s has 2 transitions at 0.5 Hz") {
  GazeStream g;
  const Aoi A = Aoi::kAttitudeIndicator, B = Aoi::kAirspeedIndicator;
  const Aoi seq[5] = {A, A, B, B, A};
  for (int i = 0; i < 5; ++i) g.push_back(gaze_at(i * 1.0, dir_deg(0.0), seq[i]));
  EmFeatures em = extract_em_features(g);
  CHECK(em.aoi_transition_freq == doctest::Approx(0.5));
}

TEST_CASE("eye: mean fixation duration reported in milliseconds") {
  GazeStream g = constant_gaze(31, 0.01, dir_deg(0.0));
  EmFeatures em = extract_em_features(g);
  CHECK(em.fixation_duration_mean == doctest::Approx(300.0).epsilon(1e-9));
}

TEST_CASE("eye: em features reject empty and zero-duration streams") {
  CHECK_THROWS_AS(extract_em_features(GazeStream{}), DataError);
  GazeStream g;
  g.push_back(gaze_at(1.0, dir_deg(0.0)));
  CHECK_THROWS_AS(extract_em_features(g), DataError);
}

TEST_CASE("eye: all gaze on one instrument gives dwell share 1") {
  GazeStream g = constant_gaze(40, 0.05, dir_deg(0.0), 0.0, Aoi::kAttitudeIndicator);
  AoiFeatures a = extract_aoi_features(g);
  CHECK(a.percent_dwell[static_cast<size_t>(Aoi::kAttitudeIndicator)] == doctest::Approx(1.0));
  for (size_t i = 0; i < kAoiCount; ++i)
    if (i != static_cast<size_t>(Aoi::kAttitudeIndicator)) CHECK(a.percent_dwell[i] == 0.0);
  CHECK(a.none_share == 0.0);
}

TEST_CASE("eye: two instruments half and half") {
  GazeStream g;
  g.push_back(gaze_at(0.0, dir_deg(0.0), Aoi::kAirspeedIndicator));
  g.push_back(gaze_at(1.0, dir_deg(0.0), Aoi::kAirspeedIndicator));
  g.push_back(gaze_at(2.0, dir_deg(0.0), Aoi::kFrontCockpitGlass));
  g.push_back(gaze_at(3.0, dir_deg(0.0), Aoi::kFrontCockpitGlass));
  AoiFeatures a = extract_aoi_features(g);
  CHECK(a.percent_dwell[static_cast<size_t>(Aoi::kAirspeedIndicator)] == doctest::Approx(0.5));
  CHECK(a.percent_dwell[static_cast<size_t>(Aoi::kFrontCockpitGlass)] == doctest::Approx(0.5));
}

TEST_CASE("eye: dwell shares plus none and unknown sum to 1") {
  GazeStream g;
  const Aoi kinds[] = {Aoi::kAttitudeIndicator, Aoi::kNone, Aoi::kUnknown, Aoi::kTachometer,
                       Aoi::kVerticalSpeedIndicator};
  double t = 0.0;
  for (int i = 0; i < 40; ++i) {
    g.push_back(gaze_at(t, dir_deg(0.0), kinds[i % 5]));
    t += 0.05 + 0.01 * (i % 3);
  }
  AoiFeatures a = extract_aoi_features(g);
  double total = a.none_share + a.unknown_share;
  for (size_t i = 0; i < kAoiCount; ++i) total += a.percent_dwell[i];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.none_share > 0.0);
  CHECK(a.unknown_share > 0.0);
}

TEST_CASE("eye: total fixation time never exceeds stream span") {
  GazeStream g;
  double t = 0.0;
  for (int block = 0; block < 4; ++block) {
    for (int i = 0; i < 25; ++i, t += 0.008) g.push_back(gaze_at(t, dir_deg(block * 15.0)));
  }
  FixationResult r = detect_fixations(g);
  double fix_total = 0.0;
  for (const Fixation& f : r.fixations) fix_total += f.duration();
  CHECK(fix_total <= g.back().t - g.front().t + 1e-12);
}

TEST_CASE("eye: features are invariant to a time shift") {
  GazeStream g;
  double t = 0.0;
  for (int block = 0; block < 3; ++block)
    for (int i = 0; i < 30; ++i, t += 0.01)
      g.push_back(gaze_at(t, dir_deg(block * 25.0), block % 2 ? Aoi::kTachometer : Aoi::kRadioCompass));
  GazeStream shifted = g;
  for (GazeSample& s : shifted) s.t += 1000.0;

  EmFeatures a = extract_em_features(g), b = extract_em_features(shifted);
  CHECK(a.fixation_count == b.fixation_count);
  CHECK(a.fixation_duration_mean == doctest::Approx(b.fixation_duration_mean).epsilon(1e-9));
  CHECK(a.aoi_transition_freq == doctest::Approx(b.aoi_transition_freq).epsilon(1e-9));
  CHECK(a.sd_fix_x == b.sd_fix_x);

  AoiFeatures pa = extract_aoi_features(g), pb = extract_aoi_features(shifted);
  for (size_t i = 0; i < kAoiCount; ++i)
    CHECK(pa.percent_dwell[i] == doctest::Approx(pb.percent_dwell[i]).epsilon(1e-9));
}

TEST_CASE("eye: doubling the sample rate of a noiseless trace changes little") {
  GazeStream lo, hi;
  for (int i = 0; i <= 50; ++i) lo.push_back(gaze_at(i * 0.02, dir_deg(0.0), Aoi::kAttitudeIndicator));
  for (int i = 0; i <= 100; ++i) hi.push_back(gaze_at(i * 0.01, dir_deg(0.0), Aoi::kAttitudeIndicator));
  EmFeatures a = extract_em_features(lo), b = extract_em_features(hi);
  CHECK(a.fixation_count == b.fixation_count);
  CHECK(std::fabs(a.fixation_duration_mean - b.fixation_duration_mean) < 1e-6);
  CHECK(std::fabs(a.sd_fix_x - b.sd_fix_x) < 1e-6);
  AoiFeatures pa = extract_aoi_features(lo), pb = extract_aoi_features(hi);
  CHECK(std::fabs(pa.percent_dwell[static_cast<size_t>(Aoi::kAttitudeIndicator)] -
                  pb.percent_dwell[static_cast<size_t>(Aoi::kAttitudeIndicator)]) < 1e-6);
}
