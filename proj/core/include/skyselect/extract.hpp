#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "skyselect/dataset.hpp"
#include "skyselect/telemetry.hpp"

namespace skyselect {

// One participant's full feature vector in registry column order (19 AOI
// dwell shares, 7 eye-movement summaries, 37 flight-dynamics scalars).
// Missing flight probes stay NaN for later imputation.
struct ParticipantFeatures {
  std::vector<double> values;  // registry size
  size_t missing = 0;          // NaN cells
  size_t skipped_gaze = 0;     // zero-direction samples dropped by fixation detection
};

ParticipantFeatures extract_participant_features(const ParticipantRecord& rec);

// Extracts every participant (optionally in parallel; output independent of
// jobs) into the full 63-column matrix. Errors carry the participant id.
FeatureMatrix extract_cohort_features(const Cohort& cohort, size_t jobs = 1);

}  // namespace skyselect
