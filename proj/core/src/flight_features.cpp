#include <algorithm>
#include <cmath>
#include <limits>

#include "skyselect/common.hpp"
#include "skyselect/flight_features.hpp"

namespace skyselect {

namespace {

constexpr double kEarthRadiusM = 6371000.0;
constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// First index i >= from starting a run where pred holds on every sample for
// at least dwell seconds. Runs cut short by the end of the stream do not
// qualify. Returns flight.size() when there is none.
template <typename Pred>
size_t find_sustained(const FlightStream& flight, size_t from, double dwell, Pred pred) {
  const size_t n = flight.size();
  size_t i = from;
  while (i < n) {
    if (!pred(flight[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < n && pred(flight[j + 1])) ++j;
    if (flight[j].t - flight[i].t >= dwell) return i;
    i = j + 1;
  }
  return n;
}

}  // namespace

LandingEvent detect_landing(const FlightStream& flight, const LandingOptions& opts) {
  if (flight.size() < 2) throw DataError("landing detection: stream too short");

  size_t airborne = flight.size();
  for (size_t i = 0; i < flight.size(); ++i) {
    if (flight[i].agl > opts.airborne_agl_m) {
      airborne = i;
      break;
    }
  }
  if (airborne == flight.size())
    throw DataError(strprintf("never airborne: AGL never exceeded %g m", opts.airborne_agl_m));

  const size_t takeoff = find_sustained(flight, 0, opts.dwell_s, [&](const FlightSample& s) {
    return s.agl > opts.agl_threshold_m;
  });
  if (takeoff == flight.size())
    throw DataError(strprintf("no takeoff: AGL never sustained above %g m for %g s",
                              opts.agl_threshold_m, opts.dwell_s));

  const size_t touchdown =
      find_sustained(flight, airborne + 1, opts.dwell_s,
                     [&](const FlightSample& s) { return s.agl <= opts.agl_threshold_m; });
  if (touchdown == flight.size())
    throw DataError(strprintf("no landing: AGL never sustained at or below %g m for %g s after flight",
                              opts.agl_threshold_m, opts.dwell_s));

  LandingEvent event;
  event.takeoff_index = takeoff;
  event.takeoff_time = flight[takeoff].t;
  event.touchdown_index = touchdown;
  event.touchdown_time = flight[touchdown].t;
  event.stop_index = flight.size() - 1;
  event.stop_flagged = true;
  for (size_t i = touchdown; i < flight.size(); ++i) {
    if (flight[i].gs < opts.stop_gs_ms) {
      event.stop_index = i;
      event.stop_flagged = false;
      break;
    }
  }
  event.full_stop_time = flight[event.stop_index].t;
  return event;
}

double sample_at(const FlightStream& flight, double t, double FlightSample::*field) {
  if (flight.empty()) throw DataError("sample_at: empty stream");
  if (t < flight.front().t || t > flight.back().t)
    throw DataError(strprintf("sample_at: t=%g outside stream span [%g, %g]", t, flight.front().t,
                              flight.back().t));
  const auto it = std::lower_bound(flight.begin(), flight.end(), t,
                                   [](const FlightSample& s, double v) { return s.t < v; });
  if (it->t == t) return (*it).*field;
  const FlightSample& hi = *it;
  const FlightSample& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return lo.*field + w * (hi.*field - lo.*field);
}

std::vector<double> moving_average(const std::vector<double>& v, size_t window) {
  if (window < 1) throw ValidationError("moving average: window must be positive");
  const size_t half = window / 2;
  const size_t n = v.size();
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t lo = i >= half ? i - half : 0;
    const size_t hi = std::min(n - 1, i + half);
    double s = 0.0;
    for (size_t k = lo; k <= hi; ++k) s += v[k];
    out[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

namespace {

struct MeanSd {
  double mean = 0.0, sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd out;
  if (v.empty()) return out;
  const double n = static_cast<double>(v.size());
  for (double x : v) out.mean += x;
  out.mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.sd = std::sqrt(ss / n);
  return out;
}

}  // namespace

QarFeatures extract_qar_features(const FlightStream& flight, const LandingOptions& opts) {
  QarFeatures out;
  out.landing = detect_landing(flight, opts);
  const LandingEvent& ev = out.landing;
  const size_t n = flight.size();
  const double td = ev.touchdown_time;

  // Interpolated probe that flags out-of-span times as missing.
  auto probe = [&](double t, double FlightSample::*field) {
    if (t < flight.front().t || t > flight.back().t) {
      ++out.missing_count;
      return kNaN;
    }
    return sample_at(flight, t, field);
  };

  out.ldg_time = td;
  out.total_flight_time = td - ev.takeoff_time;
  out.aoa_1s = probe(td - 1.0, &FlightSample::aoa);
  out.aoa_8s = probe(td - 8.0, &FlightSample::aoa);
  out.pitch_1s = probe(td - 1.0, &FlightSample::pitch);
  out.pitch_8s = probe(td - 8.0, &FlightSample::pitch);
  out.rudder_1s = probe(td - 1.0, &FlightSample::rudder_input);
  out.rudder_8s = probe(td - 8.0, &FlightSample::rudder_input);
  out.elevator_1s = probe(td - 1.0, &FlightSample::elevator_input);
  out.elevator_8s = probe(td - 8.0, &FlightSample::elevator_input);
  out.rollinput_1s = probe(td - 1.0, &FlightSample::roll_input);
  out.rollinput_8s = probe(td - 8.0, &FlightSample::roll_input);
  out.tas_1s = probe(td - 1.0, &FlightSample::tas);
  out.tas_8s = probe(td - 8.0, &FlightSample::tas);
  out.gs_1s = probe(td - 1.0, &FlightSample::gs);
  out.gs_8s = probe(td - 8.0, &FlightSample::gs);

  // Extrema of raw angles over the airborne segment.
  out.aoa_min = out.roll_min = out.pitch_min = std::numeric_limits<double>::infinity();
  out.aoa_max = out.roll_max = out.pitch_max = -std::numeric_limits<double>::infinity();
  for (size_t i = ev.takeoff_index; i <= ev.touchdown_index; ++i) {
    out.aoa_min = std::min(out.aoa_min, flight[i].aoa);
    out.aoa_max = std::max(out.aoa_max, flight[i].aoa);
    out.roll_min = std::min(out.roll_min, flight[i].roll);
    out.roll_max = std::max(out.roll_max, flight[i].roll);
    out.pitch_min = std::min(out.pitch_min, flight[i].pitch);
    out.pitch_max = std::max(out.pitch_max, flight[i].pitch);
  }

  // Local east-north-up frame: equirectangular about the first reference
  // point, meter-per-degree scaling frozen at the airfield latitude.
  const double lat0 = flight.front().ref_latitude;
  const double lon0 = flight.front().ref_longitude;
  const double m_per_deg = kPi / 180.0 * kEarthRadiusM;
  const double cos0 = std::cos(lat0 * kPi / 180.0);

  std::vector<double> east(n), north(n), times(n);
  for (size_t i = 0; i < n; ++i) {
    east[i] = (flight[i].longitude - lon0) * cos0 * m_per_deg;
    north[i] = (flight[i].latitude - lat0) * m_per_deg;
    times[i] = flight[i].t;
  }

  // Signed per-sample offsets to the reference path over the airborne
  // segment; dist_err is their 3D norm.
  std::vector<double> e_err, n_err, u_err, d_err;
  for (size_t i = ev.takeoff_index; i <= ev.touchdown_index; ++i) {
    const double e = (flight[i].longitude - flight[i].ref_longitude) * cos0 * m_per_deg;
    const double nn = (flight[i].latitude - flight[i].ref_latitude) * m_per_deg;
    const double u = flight[i].asl - flight[i].ref_height;
    e_err.push_back(e);
    n_err.push_back(nn);
    u_err.push_back(u);
    d_err.push_back(std::sqrt(e * e + nn * nn + u * u));
  }
  const MeanSd me = mean_sd(e_err), mn = mean_sd(n_err), mu = mean_sd(u_err), md = mean_sd(d_err);
  out.longitude_err_mean = me.mean;
  out.longitude_err_sd = me.sd;
  out.latitude_err_mean = mn.mean;
  out.latitude_err_sd = mn.sd;
  out.height_err_mean = mu.mean;
  out.height_err_sd = mu.sd;
  out.dist_err_mean = md.mean;
  out.dist_err_sd = md.sd;

  // Differentiation happens on smoothed series.
  const std::vector<double> xs = moving_average(east);
  const std::vector<double> ys = moving_average(north);
  std::vector<double> vs_raw(n);
  for (size_t i = 0; i < n; ++i) vs_raw[i] = flight[i].vertical_speed;
  const std::vector<double> vs = moving_average(vs_raw);

  // Path curvature from 5-point central stencils inside the airborne segment.
  out.rou_min = kNaN;
  out.rou_max = kNaN;
  bool have_rou = false;
  for (size_t i = ev.takeoff_index + 2; i + 2 <= ev.touchdown_index; ++i) {
    const double h = (times[i + 2] - times[i - 2]) / 4.0;
    const double xp = (xs[i - 2] - 8.0 * xs[i - 1] + 8.0 * xs[i + 1] - xs[i + 2]) / (12.0 * h);
    const double yp = (ys[i - 2] - 8.0 * ys[i - 1] + 8.0 * ys[i + 1] - ys[i + 2]) / (12.0 * h);
    const double xpp =
        (-xs[i - 2] + 16.0 * xs[i - 1] - 30.0 * xs[i] + 16.0 * xs[i + 1] - xs[i + 2]) / (12.0 * h * h);
    const double ypp =
        (-ys[i - 2] + 16.0 * ys[i - 1] - 30.0 * ys[i] + 16.0 * ys[i + 1] - ys[i + 2]) / (12.0 * h * h);
    const double speed_sq = xp * xp + yp * yp;
    if (speed_sq <= 1e-12) continue;
    const double rou = std::abs(xp * ypp - yp * xpp) / std::pow(speed_sq, 1.5);
    if (!have_rou) {
      out.rou_min = out.rou_max = rou;
      have_rou = true;
    } else {
      out.rou_min = std::min(out.rou_min, rou);
      out.rou_max = std::max(out.rou_max, rou);
    }
  }
  if (!have_rou) out.missing_count += 2;

  // Vertical acceleration: central difference of smoothed vertical speed.
  auto acc_h_at = [&](size_t i) {
    return (vs[i + 1] - vs[i - 1]) / (times[i + 1] - times[i - 1]);
  };
  out.acc_h_max = kNaN;
  bool have_acc_h = false;
  for (size_t i = std::max<size_t>(ev.takeoff_index, 1); i + 1 <= ev.touchdown_index && i + 1 < n; ++i) {
    const double a = std::abs(acc_h_at(i));
    out.acc_h_max = have_acc_h ? std::max(out.acc_h_max, a) : a;
    have_acc_h = true;
  }
  if (!have_acc_h) ++out.missing_count;

  // Horizontal acceleration: differentiate the track velocity (itself a
  // central difference of the smoothed positions).
  std::vector<double> vx(n, 0.0), vy(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    vx[i] = (xs[i + 1] - xs[i - 1]) / (times[i + 1] - times[i - 1]);
    vy[i] = (ys[i + 1] - ys[i - 1]) / (times[i + 1] - times[i - 1]);
  }
  out.acc_xy_max = kNaN;
  bool have_acc_xy = false;
  for (size_t i = std::max<size_t>(ev.takeoff_index, 2); i + 2 <= ev.touchdown_index && i + 2 < n; ++i) {
    const double ax = (vx[i + 1] - vx[i - 1]) / (times[i + 1] - times[i - 1]);
    const double ay = (vy[i + 1] - vy[i - 1]) / (times[i + 1] - times[i - 1]);
    const double a = std::sqrt(ax * ax + ay * ay);
    out.acc_xy_max = have_acc_xy ? std::max(out.acc_xy_max, a) : a;
    have_acc_xy = true;
  }
  if (!have_acc_xy) ++out.missing_count;

  // Magnitude of the vertical-acceleration peak in the 1 s window around
  // touchdown.
  out.vert_accel_landing = kNaN;
  bool have_val = false;
  for (size_t i = 1; i + 1 < n; ++i) {
    if (times[i] < td - 0.5 || times[i] > td + 0.5) continue;
    const double a = std::abs(acc_h_at(i));
    out.vert_accel_landing = have_val ? std::max(out.vert_accel_landing, a) : a;
    have_val = true;
  }
  if (!have_val) ++out.missing_count;

  // Mean raw vertical speed over the last 30 airborne seconds.
  double vsum = 0.0;
  size_t vcount = 0;
  for (size_t i = ev.takeoff_index; i <= ev.touchdown_index; ++i) {
    if (times[i] < td - 30.0) continue;
    vsum += flight[i].vertical_speed;
    ++vcount;
  }
  if (vcount > 0) {
    out.velocity_descent_mean = vsum / static_cast<double>(vcount);
  } else {
    out.velocity_descent_mean = kNaN;
    ++out.missing_count;
  }

  // Ground roll: horizontal path length from touchdown to the full stop.
  double slide = 0.0;
  for (size_t i = ev.touchdown_index; i < ev.stop_index; ++i) {
    const double dx = xs[i + 1] - xs[i], dy = ys[i + 1] - ys[i];
    slide += std::sqrt(dx * dx + dy * dy);
  }
  out.slide_length = slide;
  return out;
}

std::array<double, kQarCount> QarFeatures::to_array() const {
  return {ldg_time,
          vert_accel_landing,
          aoa_1s,
          aoa_8s,
          aoa_min,
          aoa_max,
          pitch_1s,
          pitch_8s,
          rudder_1s,
          rudder_8s,
          elevator_1s,
          elevator_8s,
          rollinput_1s,
          rollinput_8s,
          tas_1s,
          tas_8s,
          gs_1s,
          gs_8s,
          velocity_descent_mean,
          longitude_err_mean,
          longitude_err_sd,
          latitude_err_mean,
          latitude_err_sd,
          height_err_mean,
          height_err_sd,
          dist_err_mean,
          dist_err_sd,
          rou_min,
          rou_max,
          acc_h_max,
          acc_xy_max,
          roll_min,
          roll_max,
          pitch_min,
          pitch_max,
          slide_length,
          total_flight_time};
}

PerformanceIndicators performance_indicators(const QarFeatures& qar) {
  PerformanceIndicators out;
  out.total_flight_time = qar.total_flight_time;
  out.pitch_1s = qar.pitch_1s;
  out.dist_err_mean = qar.dist_err_mean;
  out.dist_err_sd = qar.dist_err_sd;
  return out;
}

}  // namespace skyselect
