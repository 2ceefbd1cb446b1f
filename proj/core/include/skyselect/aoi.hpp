#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace skyselect {

// The 19 cockpit areas of interest, in canonical registry order, plus two
// non-member states: None (gaze not on any AOI) and Unknown (unrecognized
// label, never silently mapped to a member). Both non-members count toward
// total gaze time but toward no named AOI's dwell.
enum class Aoi : uint8_t {
  kAircraftClocks = 0,
  kAirspeedIndicator,
  kAttitudeIndicator,
  kVerticalSpeedIndicator,
  kRadioCompass,
  kInletPressureGauge,
  kAltitudeIndicator,
  kTurnAndSlipIndicator,
  kAircraftTriUseMeter,
  kMagneticCourseCorrectionCalculator,
  kTachometer,
  kCylinderHeadThermometer,
  kAirInletTemperatureIndicator,
  kCurrentAndVoltageMeters,
  kTankPressureGauge,
  kSpareMagneticCompass,
  kLeftCockpitGlass,
  kFrontCockpitGlass,
  kRightCockpitGlass,
  kNone,
  kUnknown,
};

inline constexpr size_t kAoiCount = 19;

// Canonical display name ("vertical speed indicator", "None", "unknown").
std::string_view aoi_name(Aoi a);

// Registry column name ("aoi.vertical_speed_indicator"); named AOIs only.
std::string_view aoi_registry_name(Aoi a);

// Case- and separator-insensitive parse of a display or registry-style name.
// "None" (and the empty string) map to kNone; anything unrecognized maps to
// kUnknown, never to a member.
Aoi parse_aoi(std::string_view text);

// The 19 named AOIs in registry order.
const std::array<Aoi, kAoiCount>& all_aois();

}  // namespace skyselect
