#include "skyselect/extract.hpp"

#include "skyselect/common.hpp"
#include "skyselect/eye_features.hpp"
#include "skyselect/flight_features.hpp"
#include "skyselect/parallel.hpp"
#include "skyselect/registry.hpp"

namespace skyselect {

ParticipantFeatures extract_participant_features(const ParticipantRecord& rec) {
  ParticipantFeatures out;
  out.values.reserve(FeatureRegistry::instance().size());

  const AoiFeatures aoi = extract_aoi_features(rec.gaze);
  for (double share : aoi.percent_dwell) out.values.push_back(share);

  const EmFeatures em = extract_em_features(rec.gaze);
  out.values.push_back(em.sd_fix_x);
  out.values.push_back(em.sd_fix_y);
  out.values.push_back(em.sd_fix_z);
  out.values.push_back(em.eye_opening_mean);
  out.values.push_back(em.aoi_transition_freq);
  out.values.push_back(em.fixation_duration_mean);
  out.values.push_back(em.fixation_count);

  const QarFeatures qar = extract_qar_features(rec.flight);
  for (double v : qar.to_array()) out.values.push_back(v);
  out.missing = qar.missing_count;

  const FixationResult fix = detect_fixations(rec.gaze);
  out.skipped_gaze = fix.skipped_samples;

  if (out.values.size() != FeatureRegistry::instance().size())
    throw ValidationError("feature vector does not match the registry size");
  return out;
}

FeatureMatrix extract_cohort_features(const Cohort& cohort, size_t jobs) {
  std::vector<std::vector<double>> rows(cohort.size());
  std::vector<std::string> errors(cohort.size());
  parallel_for(cohort.size(), jobs, [&](size_t i) {
    try {
      rows[i] = extract_participant_features(cohort[i]).values;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (size_t i = 0; i < cohort.size(); ++i)
    if (!errors[i].empty())
      throw DataError(strprintf("participant '%s': %s", cohort[i].id.c_str(), errors[i].c_str()));

  std::vector<std::string> ids;
  std::vector<int> labels;
  ids.reserve(cohort.size());
  labels.reserve(cohort.size());
  for (const ParticipantRecord& rec : cohort) {
    ids.push_back(rec.id);
    labels.push_back(rec.label);
  }
  return assemble_matrix(ids, labels, rows, DatasetCombo::kAll);
}

}  // namespace skyselect
