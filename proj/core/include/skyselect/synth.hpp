#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skyselect/aoi.hpp"
#include "skyselect/telemetry.hpp"

namespace skyselect {

// Per-class generator parameters. Group-level targets (means/SDs) are realized
// by drawing one value per participant and shaping that participant's streams
// around the draw, so cohort statistics converge to the configured targets.
//
// Positivity-constrained quantities (times, distances, noise scales) draw from
// a moment-matched gamma; sign-free quantities draw from a normal. A zero SD
// collapses either draw to its mean.
struct ClassProfile {
  // Flight plan.
  double flight_time_mean_s = 0.0, flight_time_sd_s = 0.0;  // rotation to touchdown
  double cruise_speed_ms = 0.0, cruise_speed_sd_ms = 0.0;
  double climb_rate_ms = 0.0;
  double approach_sink_mean_ms = 0.0, approach_sink_sd_ms = 0.0;
  double touchdown_sink_mean_ms = 0.0, touchdown_sink_sd_ms = 0.0;
  double landing_pitch_mean_deg = 0.0, landing_pitch_sd_deg = 0.0;  // held 1 s before touchdown
  double approach_pitch_mean_deg = 0.0, approach_pitch_sd_deg = 0.0;
  double bank_mean_deg = 0.0, bank_sd_deg = 0.0;
  double slide_mean_m = 0.0, slide_sd_m = 0.0;  // touchdown to full stop
  double control_noise = 0.0, control_noise_sd = 0.0;  // stick/rudder activity scale
  double aoa_offset_deg = 0.0;

  // Path-tracking noise around the briefed centerline, meters.
  // lateral_mean_* targets the per-flight MEAN of the distance-to-centerline
  // magnitude; lateral_spread_* targets its per-flight SD.
  double lateral_mean_m = 0.0, lateral_mean_sd_m = 0.0;
  double lateral_spread_m = 0.0, lateral_spread_sd_m = 0.0;
  double vertical_noise_m = 0.0, vertical_noise_sd_m = 0.0;

  // Gaze model: a Markov visit chain over the 19 AOIs. aoi_share_mean is the
  // stationary dwell-share target (sums to 1); aoi_share_sd is the
  // across-participant spread of each share; aoi_dwell_mean_s is the mean
  // duration of one visit to each AOI.
  std::array<double, kAoiCount> aoi_share_mean{};
  std::array<double, kAoiCount> aoi_share_sd{};
  std::array<double, kAoiCount> aoi_dwell_mean_s{};
  double visit_scale_sd = 0.0;   // per-participant visit-duration multiplier spread
  double gaze_jitter_deg = 0.0;  // fixation stability: angular noise inside a visit
  double eye_open_mean = 0.0, eye_open_sd = 0.0;

  // Row-stochastic 19x19 AOI transition matrix: every row is the normalized
  // share vector, so the chain's stationary visit distribution equals it.
  std::array<std::array<double, kAoiCount>, kAoiCount> transition_matrix() const;
};

struct CohortSpec {
  size_t n_expert = 23, n_novice = 23;
  uint64_t seed = 7;
  double gaze_hz = 120.0, flight_hz = 30.0;
  ClassProfile expert, novice;

  CohortSpec();  // profiles initialized from default_profiles()
};

// Calibrated (expert, novice) parameter sets.
std::pair<ClassProfile, ClassProfile> default_profiles();

// One participant's raw streams; deterministic in (profile, label, seed,
// rates). The record id encodes label and seed; callers may rename it.
ParticipantRecord generate_participant(const ClassProfile& profile, int label, uint64_t seed,
                                       double gaze_hz = 120.0, double flight_hz = 30.0);

// Writes one gaze CSV and one flight CSV per participant plus manifest.csv
// into out_dir (created if absent), experts first. Per-participant seeds are
// split from spec.seed by cohort index, so any jobs count yields byte-identical
// files. Returns the manifest entries in written order.
std::vector<ManifestEntry> generate_cohort(const CohortSpec& spec, const std::string& out_dir,
                                           int jobs = 1);

}  // namespace skyselect
