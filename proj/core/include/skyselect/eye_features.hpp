#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "skyselect/aoi.hpp"
#include "skyselect/telemetry.hpp"

namespace skyselect {

struct IvtOptions {
  double velocity_threshold_deg_s = 30.0;
  double min_duration_s = 0.060;
};

struct Fixation {
  double start = 0.0, end = 0.0;  // seconds; end > start
  Vec3 centroid_dir;              // normalized mean direction
  double duration() const { return end - start; }
};

struct FixationResult {
  std::vector<Fixation> fixations;
  size_t saccade_count = 0;    // inter-fixation gaps
  size_t skipped_samples = 0;  // zero-norm directions dropped from the trace
};

// Velocity-threshold fixation detection on the left-eye direction series.
// Consecutive sample pairs with angular velocity strictly below the threshold
// merge into candidates; candidates shorter than the minimum duration are
// dropped. Streams with fewer than two usable samples yield an empty result.
FixationResult detect_fixations(const GazeStream& gaze, const IvtOptions& opts = {});

struct EmFeatures {
  double sd_fix_x = 0.0, sd_fix_y = 0.0, sd_fix_z = 0.0;  // population SDs of FVL_X/Y/Z
  double eye_opening_mean = 0.0;                           // mean EOL
  double aoi_transition_freq = 0.0;                        // label changes per second
  double fixation_duration_mean = 0.0;                     // milliseconds
  double fixation_count = 0.0;
  double saccade_count = 0.0;  // computed and reported; not a registry feature
};

// The dwell-time shares. The 19 named shares plus none_share and
// unknown_share sum to 1 whenever total gaze time is positive.
struct AoiFeatures {
  std::array<double, kAoiCount> percent_dwell{};
  double none_share = 0.0;
  double unknown_share = 0.0;
};

EmFeatures extract_em_features(const GazeStream& gaze, const IvtOptions& opts = {});
AoiFeatures extract_aoi_features(const GazeStream& gaze);

}  // namespace skyselect
