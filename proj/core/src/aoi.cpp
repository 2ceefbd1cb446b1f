#include "skyselect/aoi.hpp"

#include <unordered_map>

#include "skyselect/common.hpp"

namespace skyselect {
namespace {

struct AoiNames {
  const char* display;
  const char* registry;
};

constexpr std::array<AoiNames, kAoiCount> kNames = {{
    {"aircraft clocks", "aoi.aircraft_clocks"},
    {"airspeed indicator", "aoi.airspeed_indicator"},
    {"attitude indicator", "aoi.attitude_indicator"},
    {"vertical speed indicator", "aoi.vertical_speed_indicator"},
    {"radio compass", "aoi.radio_compass"},
    {"inlet pressure gauge", "aoi.inlet_pressure_gauge"},
    {"altitude indicator", "aoi.altitude_indicator"},
    {"turn-and-slip indicator", "aoi.turn_and_slip_indicator"},
    {"aircraft tri-use meter", "aoi.aircraft_tri_use_meter"},
    {"magnetic course correction calculator", "aoi.magnetic_course_correction_calculator"},
    {"tachometer", "aoi.tachometer"},
    {"cylinder head thermometer", "aoi.cylinder_head_thermometer"},
    {"air inlet temperature indicator", "aoi.air_inlet_temperature_indicator"},
    {"current and voltage meters", "aoi.current_and_voltage_meters"},
    {"tank pressure gauge", "aoi.tank_pressure_gauge"},
    {"spare magnetic compass", "aoi.spare_magnetic_compass"},
    {"left aircraft cockpit glass", "aoi.left_aircraft_cockpit_glass"},
    {"front aircraft cockpit glass", "aoi.front_aircraft_cockpit_glass"},
    {"right aircraft cockpit glass", "aoi.right_aircraft_cockpit_glass"},
}};

// Lowercase, fold '-'/'_'/'.' to spaces, collapse runs, trim.
std::string normalize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char raw : s) {
    char c = raw;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c == '-' || c == '_' || c == '.' || c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

const std::unordered_map<std::string, Aoi>& lookup() {
  static const std::unordered_map<std::string, Aoi>* map = [] {
    auto* m = new std::unordered_map<std::string, Aoi>;
    for (size_t i = 0; i < kAoiCount; ++i) {
      (*m)[normalize(kNames[i].display)] = static_cast<Aoi>(i);
      (*m)[normalize(kNames[i].registry)] = static_cast<Aoi>(i);
      // Registry name without the group prefix ("vertical speed indicator"
      // already covered; "aoi vertical speed indicator" comes from the line
      // above).
    }
    (*m)[normalize("None")] = Aoi::kNone;
    (*m)[""] = Aoi::kNone;
    return m;
  }();
  return *map;
}

}  // namespace

std::string_view aoi_name(Aoi a) {
  size_t i = static_cast<size_t>(a);
  if (i < kAoiCount) return kNames[i].display;
  if (a == Aoi::kNone) return "None";
  return "unknown";
}

std::string_view aoi_registry_name(Aoi a) {
  size_t i = static_cast<size_t>(a);
  if (i >= kAoiCount) throw ValidationError("registry names exist only for the 19 named AOIs");
  return kNames[i].registry;
}

Aoi parse_aoi(std::string_view text) {
  auto& map = lookup();
  auto it = map.find(normalize(text));
  if (it == map.end()) return Aoi::kUnknown;
  return it->second;
}

const std::array<Aoi, kAoiCount>& all_aois() {
  static const std::array<Aoi, kAoiCount> arr = [] {
    std::array<Aoi, kAoiCount> a{};
    for (size_t i = 0; i < kAoiCount; ++i) a[i] = static_cast<Aoi>(i);
    return a;
  }();
  return arr;
}

}  // namespace skyselect
