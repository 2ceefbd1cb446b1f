#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "skyselect/telemetry.hpp"

namespace skyselect {

struct LandingOptions {
  double agl_threshold_m = 0.5;  // ground-contact threshold (also the takeoff mirror)
  double dwell_s = 2.0;          // contact must persist this long
  double airborne_agl_m = 5.0;   // evidence the flight ever got airborne
  double stop_gs_ms = 1.0;       // full stop when ground speed drops below this
};

struct LandingEvent {
  double takeoff_time = 0.0;    // first AGL above threshold, sustained
  double touchdown_time = 0.0;  // first AGL at/below threshold after being airborne, sustained
  double full_stop_time = 0.0;  // first gs below stop threshold after touchdown
  size_t takeoff_index = 0, touchdown_index = 0, stop_index = 0;
  bool stop_flagged = false;  // stream ended before a full stop; last timestamp used
};

// Finds the (single) landing. Throws DataError "never airborne" when AGL
// never exceeds airborne_agl_m and "no landing" when no sustained ground
// contact follows; contact runs cut short by the end of the stream do not
// count as sustained.
LandingEvent detect_landing(const FlightStream& flight, const LandingOptions& opts = {});

// Linear interpolation of one field at time t; DataError outside the span.
double sample_at(const FlightStream& flight, double t, double FlightSample::*field);

// Centered moving average, window clamped at the edges.
std::vector<double> moving_average(const std::vector<double>& v, size_t window = 5);

inline constexpr size_t kQarCount = 37;

// The flight-dynamics scalars, one field per registry column. Missing values
// (e.g. the 8-seconds-before-touchdown probes on a short stream) are NaN and
// flagged in missing_count.
struct QarFeatures {
  double ldg_time = 0.0;
  double vert_accel_landing = 0.0;
  double aoa_1s = 0.0, aoa_8s = 0.0, aoa_min = 0.0, aoa_max = 0.0;
  double pitch_1s = 0.0, pitch_8s = 0.0;
  double rudder_1s = 0.0, rudder_8s = 0.0;
  double elevator_1s = 0.0, elevator_8s = 0.0;
  double rollinput_1s = 0.0, rollinput_8s = 0.0;
  double tas_1s = 0.0, tas_8s = 0.0;
  double gs_1s = 0.0, gs_8s = 0.0;
  double velocity_descent_mean = 0.0;
  double longitude_err_mean = 0.0, longitude_err_sd = 0.0;
  double latitude_err_mean = 0.0, latitude_err_sd = 0.0;
  double height_err_mean = 0.0, height_err_sd = 0.0;
  double dist_err_mean = 0.0, dist_err_sd = 0.0;
  double rou_min = 0.0, rou_max = 0.0;
  double acc_h_max = 0.0, acc_xy_max = 0.0;
  double roll_min = 0.0, roll_max = 0.0;
  double pitch_min = 0.0, pitch_max = 0.0;
  double slide_length = 0.0;
  double total_flight_time = 0.0;

  LandingEvent landing;
  size_t missing_count = 0;

  // Values in registry column order (qar.ldg_time .. qar.total_flight_time).
  std::array<double, kQarCount> to_array() const;
};

QarFeatures extract_qar_features(const FlightStream& flight, const LandingOptions& opts = {});

// The four headline flying-quality indicators, aliased out of QarFeatures.
struct PerformanceIndicators {
  double total_flight_time = 0.0;
  double pitch_1s = 0.0;
  double dist_err_mean = 0.0, dist_err_sd = 0.0;
};
PerformanceIndicators performance_indicators(const QarFeatures& qar);

}  // namespace skyselect
