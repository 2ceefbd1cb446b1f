#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace skyselect {

enum class FeatureGroup { kAoi, kEm, kQar };

// The seven dataset combinations, in canonical evaluation order.
enum class DatasetCombo { kAoi, kEm, kQar, kAoiEm, kAoiQar, kEmQar, kAll };

const std::array<DatasetCombo, 7>& all_combos();
std::string combo_name(DatasetCombo c);  // "aoi", "aoi_em", "aoi_em_qar", ...
// Accepts "aoi_em_qar", "aoi+em", "AOI&QAR" etc.; group order is free.
DatasetCombo parse_combo(std::string_view text);
bool combo_has(DatasetCombo c, FeatureGroup g);

struct FeatureDef {
  std::string name;  // "aoi.attitude_indicator", "em.fixation_count", "qar.dist_err_mean"
  FeatureGroup group;
};

// Fixed catalogue of the 63 extracted features in canonical column order:
// 19 AOI dwell shares, 7 eye-movement summaries, 37 flight-dynamics scalars.
// The eye-movement group is exactly seven entries; saccade count is computed
// by the extractor and surfaced on EmFeatures but deliberately not registered,
// keeping group arithmetic at 19/7/37 (pairwise sums 26/56/44, total 63).
class FeatureRegistry {
 public:
  static const FeatureRegistry& instance();

  const std::vector<FeatureDef>& features() const { return defs_; }
  size_t size() const { return defs_.size(); }
  size_t index_of(std::string_view name) const;  // throws ValidationError if absent

  std::vector<size_t> indices(DatasetCombo c) const;
  std::vector<std::string> names(DatasetCombo c) const;
  size_t count(DatasetCombo c) const;

  // FNV-1a over the ordered feature names; pinned into provenance output.
  uint64_t digest() const { return digest_; }

 private:
  FeatureRegistry();
  std::vector<FeatureDef> defs_;
  uint64_t digest_ = 0;
};

}  // namespace skyselect
