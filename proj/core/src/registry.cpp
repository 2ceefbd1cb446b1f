#include "skyselect/registry.hpp"

#include <algorithm>

#include "skyselect/aoi.hpp"
#include "skyselect/common.hpp"
#include "skyselect/rng.hpp"

namespace skyselect {

const std::array<DatasetCombo, 7>& all_combos() {
  static const std::array<DatasetCombo, 7> combos = {
      DatasetCombo::kAoi,    DatasetCombo::kEm,    DatasetCombo::kQar, DatasetCombo::kAoiEm,
      DatasetCombo::kAoiQar, DatasetCombo::kEmQar, DatasetCombo::kAll};
  return combos;
}

bool combo_has(DatasetCombo c, FeatureGroup g) {
  switch (c) {
    case DatasetCombo::kAoi:
      return g == FeatureGroup::kAoi;
    case DatasetCombo::kEm:
      return g == FeatureGroup::kEm;
    case DatasetCombo::kQar:
      return g == FeatureGroup::kQar;
    case DatasetCombo::kAoiEm:
      return g != FeatureGroup::kQar;
    case DatasetCombo::kAoiQar:
      return g != FeatureGroup::kEm;
    case DatasetCombo::kEmQar:
      return g != FeatureGroup::kAoi;
    case DatasetCombo::kAll:
      return true;
  }
  return false;
}

std::string combo_name(DatasetCombo c) {
  std::string out;
  if (combo_has(c, FeatureGroup::kAoi)) out += "aoi";
  if (combo_has(c, FeatureGroup::kEm)) out += out.empty() ? "em" : "_em";
  if (combo_has(c, FeatureGroup::kQar)) out += out.empty() ? "qar" : "_qar";
  return out;
}

DatasetCombo parse_combo(std::string_view text) {
  bool aoi = false, em = false, qar = false;
  std::string token;
  auto flush = [&]() {
    if (token.empty()) return;
    if (token == "aoi")
      aoi = true;
    else if (token == "em")
      em = true;
    else if (token == "qar")
      qar = true;
    else
      throw ValidationError(strprintf("unknown dataset group '%s' (expected aoi, em, qar)", token.c_str()));
    token.clear();
  };
  for (char raw : text) {
    char c = raw;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c == '_' || c == '+' || c == '&' || c == ',' || c == ' ' || c == '-') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  if (!aoi && !em && !qar) throw ValidationError("empty dataset combination");
  for (DatasetCombo c : all_combos()) {
    if (combo_has(c, FeatureGroup::kAoi) == aoi && combo_has(c, FeatureGroup::kEm) == em &&
        combo_has(c, FeatureGroup::kQar) == qar)
      return c;
  }
  throw ValidationError("unreachable dataset combination");
}

FeatureRegistry::FeatureRegistry() {
  for (Aoi a : all_aois()) defs_.push_back({std::string(aoi_registry_name(a)), FeatureGroup::kAoi});
  const char* em_names[] = {"em.sd_fix_x",           "em.sd_fix_y",
                            "em.sd_fix_z",           "em.eye_opening_mean",
                            "em.aoi_transition_freq", "em.fixation_duration_mean",
                            "em.fixation_count"};
  for (const char* n : em_names) defs_.push_back({n, FeatureGroup::kEm});
  const char* qar_names[] = {
      "qar.ldg_time",          "qar.vert_accel_landing", "qar.aoa_1s",           "qar.aoa_8s",
      "qar.aoa_min",           "qar.aoa_max",            "qar.pitch_1s",         "qar.pitch_8s",
      "qar.rudder_1s",         "qar.rudder_8s",          "qar.elevator_1s",      "qar.elevator_8s",
      "qar.rollinput_1s",      "qar.rollinput_8s",       "qar.tas_1s",           "qar.tas_8s",
      "qar.gs_1s",             "qar.gs_8s",              "qar.velocity_descent_mean",
      "qar.longitude_err_mean", "qar.longitude_err_sd",  "qar.latitude_err_mean", "qar.latitude_err_sd",
      "qar.height_err_mean",   "qar.height_err_sd",      "qar.dist_err_mean",    "qar.dist_err_sd",
      "qar.rou_min",           "qar.rou_max",            "qar.acc_h_max",        "qar.acc_xy_max",
      "qar.roll_min",          "qar.roll_max",           "qar.pitch_min",        "qar.pitch_max",
      "qar.slide_length",      "qar.total_flight_time"};
  for (const char* n : qar_names) defs_.push_back({n, FeatureGroup::kQar});

  uint64_t h = hash64_init();
  for (const auto& d : defs_) {
    h = hash64_mix(h, d.name);
    h = hash64_mix(h, uint64_t{'\n'});
  }
  digest_ = h;
}

const FeatureRegistry& FeatureRegistry::instance() {
  static const FeatureRegistry reg;
  return reg;
}

size_t FeatureRegistry::index_of(std::string_view name) const {
  for (size_t i = 0; i < defs_.size(); ++i)
    if (defs_[i].name == name) return i;
  throw ValidationError(strprintf("unknown feature name '%.*s'", static_cast<int>(name.size()), name.data()));
}

std::vector<size_t> FeatureRegistry::indices(DatasetCombo c) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < defs_.size(); ++i)
    if (combo_has(c, defs_[i].group)) out.push_back(i);
  return out;
}

std::vector<std::string> FeatureRegistry::names(DatasetCombo c) const {
  std::vector<std::string> out;
  for (const auto& d : defs_)
    if (combo_has(c, d.group)) out.push_back(d.name);
  return out;
}

size_t FeatureRegistry::count(DatasetCombo c) const { return indices(c).size(); }

}  // namespace skyselect
