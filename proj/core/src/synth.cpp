#include "skyselect/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "skyselect/common.hpp"
#include "skyselect/parallel.hpp"
#include "skyselect/rng.hpp"

namespace skyselect {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

// Map origin and scale; must mirror the equirectangular scaling used by the
// feature extractor so offsets written in meters round-trip exactly.
constexpr double kLon0 = 116.60;
constexpr double kLat0 = 40.07;
constexpr double kMeterPerDeg = kDeg * 6371000.0;
constexpr double kFieldElev = 35.0;

// Ground handling.
constexpr double kHoldS = 3.0;        // parked before the takeoff roll
constexpr double kGroundAccel = 2.2;  // m/s^2
constexpr double kRotateSpeed = 34.0;
constexpr double kParkTailS = 6.0;  // logged after the full stop

// Lateral-deviation wave.
constexpr double kWavePeriodS = 36.0;
constexpr double kWaveOnS = 10.0;    // after rotation
constexpr double kWaveOffLeadS = 12.0;  // before touchdown
constexpr double kWaveEdgeS = 3.0;   // window blend width

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Cosine step: 0 -> 1 over [0, 1], C1, integral over [0,1] is exactly 1/2.
double rise(double x) {
  x = clamp01(x);
  return 0.5 * (1.0 - std::cos(kPi * x));
}

// Integral of rise(t/w) dt from 0 to x (x within [0, w]).
double rise_integral(double x, double w) {
  x = std::clamp(x, 0.0, w);
  return 0.5 * x - (w / (2.0 * kPi)) * std::sin(kPi * x / w);
}

// Mean/SD moment-matched positive draw; zero SD collapses to the mean.
double draw_gamma(Rng& rng, double mean, double sd) {
  if (mean <= 0.0) return 0.0;
  if (sd <= 1e-12) return mean;
  return rng.gamma_mean_sd(mean, sd);
}

double draw_normal(Rng& rng, double mean, double sd) {
  if (sd <= 1e-12) return mean;
  return rng.normal(mean, sd);
}

// ---------------------------------------------------------------------------
// Traffic-pattern geometry: five straight legs joined by four 90-degree left
// turns, built in local east/north meters from the liftoff point, which the
// closure of the leg fractions places back under the touchdown point.

struct PathSegment {
  bool arc = false;
  double length = 0.0;
  double x0 = 0.0, y0 = 0.0;  // entry point
  double heading = 0.0;       // entry heading, radians, compass (0 = north)
};

struct PathPoint {
  double x = 0.0, y = 0.0;
  double heading = 0.0;  // radians, compass
};

struct PatternPath {
  std::vector<PathSegment> segs;
  std::vector<double> cumulative;  // end of each segment in arc length
  double radius = 0.0;
  double total = 0.0;

  PathPoint at(double s) const {
    s = std::clamp(s, 0.0, total);
    size_t i = 0;
    while (i + 1 < segs.size() && s > cumulative[i]) ++i;
    const PathSegment& seg = segs[i];
    double local = s - (i == 0 ? 0.0 : cumulative[i - 1]);
    local = std::clamp(local, 0.0, seg.length);
    PathPoint p;
    if (!seg.arc) {
      p.x = seg.x0 + local * std::sin(seg.heading);
      p.y = seg.y0 + local * std::cos(seg.heading);
      p.heading = seg.heading;
    } else {
      // Left turn: counterclockwise about a center on the left-hand side.
      double phi = local / radius;
      double cx = seg.x0 - radius * std::cos(seg.heading);
      double cy = seg.y0 + radius * std::sin(seg.heading);
      double rx = seg.x0 - cx, ry = seg.y0 - cy;
      p.x = cx + rx * std::cos(phi) - ry * std::sin(phi);
      p.y = cy + rx * std::sin(phi) + ry * std::cos(phi);
      p.heading = seg.heading - phi;
    }
    return p;
  }

  // Cosine-ramped bank shape: -1 inside left turns, 0 on straights.
  double bank_shape(double s) const {
    double shape = 0.0;
    const double ramp = 120.0;
    double start = 0.0;
    for (size_t i = 0; i < segs.size(); ++i) {
      if (segs[i].arc) {
        double a = start, b = start + segs[i].length;
        shape -= rise((s - (a - 0.5 * ramp)) / ramp) * (1.0 - rise((s - (b - 0.5 * ramp)) / ramp));
      }
      start += segs[i].length;
    }
    return std::clamp(shape, -1.0, 0.0);
  }
};

PatternPath build_pattern(double total_len) {
  PatternPath path;
  path.radius = std::min(600.0, 0.04 * total_len);
  double arcs = 4.0 * (kPi / 2.0) * path.radius;
  double legs = std::max(total_len - arcs, 0.2 * total_len);
  // Upwind, crosswind, downwind, base, final. Fractions close the circuit:
  // upwind - downwind + final = 0 and crosswind = base.
  const double frac[5] = {0.19, 0.10, 0.40, 0.10, 0.21};
  double x = 0.0, y = 0.0, heading = 0.0;
  for (int leg = 0; leg < 5; ++leg) {
    PathSegment s;
    s.length = frac[leg] * legs;
    s.x0 = x;
    s.y0 = y;
    s.heading = heading;
    path.segs.push_back(s);
    x += s.length * std::sin(heading);
    y += s.length * std::cos(heading);
    if (leg < 4) {
      PathSegment a;
      a.arc = true;
      a.length = (kPi / 2.0) * path.radius;
      a.x0 = x;
      a.y0 = y;
      a.heading = heading;
      path.segs.push_back(a);
      double cx = x - path.radius * std::cos(heading);
      double cy = y + path.radius * std::sin(heading);
      double rx = x - cx, ry = y - cy;
      x = cx + rx * std::cos(kPi / 2.0) - ry * std::sin(kPi / 2.0);
      y = cy + rx * std::sin(kPi / 2.0) + ry * std::cos(kPi / 2.0);
      heading -= kPi / 2.0;
    }
  }
  path.cumulative.resize(path.segs.size());
  double acc = 0.0;
  for (size_t i = 0; i < path.segs.size(); ++i) {
    acc += path.segs[i].length;
    path.cumulative[i] = acc;
  }
  path.total = acc;
  return path;
}

// ---------------------------------------------------------------------------
// Lateral-deviation realization. |offset|(t) is a duty-cycled two-level wave
// with cosine transitions, windowed to the airborne cruise portion. Level,
// duty and window scaling are solved so the time mean and time SD of |offset|
// over the extracted airborne span equal the participant's drawn targets.

struct DeviationWave {
  bool active = false;
  bool flat = false;     // no modulation, |offset| == high throughout
  double high = 0.0;
  double duty = 1.0;     // fraction of a period at the high level
  double edge = 0.0;     // transition half-width in phase units
  double phase = 0.0;    // in [0, 1)
  double u_on = 0.0, u_off = 0.0;

  // Magnitude and side sign at airborne time u.
  void eval(double u, double* magnitude, double* side) const {
    *magnitude = 0.0;
    *side = 1.0;
    if (!active) return;
    double w = rise((u - u_on) / kWaveEdgeS) *
               (1.0 - rise((u - (u_off - kWaveEdgeS)) / kWaveEdgeS));
    if (w <= 0.0) return;
    if (flat) {
      *magnitude = w * high;
      return;
    }
    double cycles = u / kWavePeriodS + phase;
    double k = std::floor(cycles);
    double c = cycles - k;
    double g;
    bool past_high = c >= duty + edge;
    if (c < edge) {
      g = rise((c + edge) / (2.0 * edge));
    } else if (c < duty - edge) {
      g = 1.0;
    } else if (c < duty + edge) {
      g = 1.0 - rise((c - (duty - edge)) / (2.0 * edge));
    } else if (c < 1.0 - edge) {
      g = 0.0;
    } else {
      g = rise((c - (1.0 - edge)) / (2.0 * edge));
      past_high = true;
    }
    *magnitude = w * high * g;
    // Alternate the deviation side once per period, flipping while the
    // magnitude sits at zero so the offset stays continuous.
    long long episode = static_cast<long long>(k) + (past_high ? 1 : 0);
    *side = (episode % 2 == 0) ? 1.0 : -1.0;
  }
};

DeviationWave solve_wave(double mean_target, double sd_target, double extracted_span,
                         double flight_span, double phase) {
  DeviationWave wave;
  wave.u_on = kWaveOnS;
  wave.u_off = flight_span - kWaveOffLeadS;
  wave.phase = phase;
  double span = wave.u_off - wave.u_on;
  if (span < 30.0 || mean_target <= 1e-9) return wave;
  // Window integrals: w1 = integral of the envelope, w2 of its square.
  double w1 = span - kWaveEdgeS;
  double w2 = span - 2.0 * kWaveEdgeS + 2.0 * (kWaveEdgeS * 3.0 / 8.0);
  double mean_eff = mean_target * extracted_span / w1;
  double second_eff = (mean_target * mean_target + sd_target * sd_target) * extracted_span / w2;
  double var_eff = second_eff - mean_eff * mean_eff;
  wave.active = true;
  if (var_eff <= 1e-9) {
    wave.flat = true;
    wave.high = mean_eff;
    return wave;
  }
  // Two-level wave with cosine transitions of half-width d (phase units):
  // time mean = high * p, time mean square = high^2 * (p - d/2).
  double rho = mean_eff * mean_eff / second_eff;
  double d = std::min({kWaveEdgeS / kWavePeriodS, rho / 3.0, 0.45 * (1.0 - rho)});
  double p;
  if (d < 1e-9) {
    d = 0.0;
    p = rho;
  } else {
    p = 0.5 * (rho + std::sqrt(std::max(0.0, rho * rho - 2.0 * d * rho)));
  }
  p = std::clamp(p, 1e-6, 1.0 - 1e-6);
  wave.duty = p;
  wave.edge = d;
  wave.high = mean_eff / p;
  return wave;
}

// ---------------------------------------------------------------------------
// Per-participant flight realization.

struct FlightDraws {
  double T = 0.0;  // rotation-to-touchdown flying time actually simulated
  double T_target = 0.0;
  double v_cruise = 0.0;
  double climb = 0.0;
  double sink = 0.0, td_sink = 0.0;
  double land_pitch = 0.0, app_pitch = 0.0, cruise_pitch = 0.0;
  double bank = 0.0;
  double slide = 0.0;
  double ctrl = 0.0;
  double M = 0.0, S = 0.0;       // lateral deviation targets
  double vert_sd = 0.0;
  double u_cross_up = 0.0;       // AGL 0.5 crossing after rotation
  double pattern_alt = 0.0;
  double u_level = 0.0;          // climb/cruise blend center
  double u_descend = 0.0;        // descent entry
  double wave_phase = 0.0;
  double vert_amp[3] = {0, 0, 0};
  double vert_phi[3] = {0, 0, 0};
  double ctrl_phi[6] = {0, 0, 0, 0, 0, 0};
};

// Climb altitude above field at airborne time u (before the level-off blend).
double climb_height(double u, double climb) {
  if (u <= 6.0) return climb * rise_integral(u, 6.0);
  return climb * (3.0 + (u - 6.0));
}

FlightDraws make_flight_draws(const ClassProfile& p, Rng& rng) {
  FlightDraws d;
  d.T_target = std::max(150.0, draw_gamma(rng, p.flight_time_mean_s, p.flight_time_sd_s));
  d.v_cruise = std::clamp(draw_normal(rng, p.cruise_speed_ms, p.cruise_speed_sd_ms), 25.0, 80.0);
  d.climb = std::clamp(p.climb_rate_ms * draw_normal(rng, 1.0, 0.06), 1.5, 8.0);
  d.sink = std::clamp(draw_gamma(rng, p.approach_sink_mean_ms, p.approach_sink_sd_ms), 1.0, 8.0);
  d.td_sink =
      std::clamp(draw_gamma(rng, p.touchdown_sink_mean_ms, p.touchdown_sink_sd_ms), 0.3, 4.0);
  d.land_pitch =
      std::clamp(draw_normal(rng, p.landing_pitch_mean_deg, p.landing_pitch_sd_deg), -80.0, 80.0);
  d.app_pitch =
      std::clamp(draw_normal(rng, p.approach_pitch_mean_deg, p.approach_pitch_sd_deg), -25.0, 10.0);
  d.cruise_pitch = draw_normal(rng, 2.2, 0.4);
  d.bank = std::clamp(draw_gamma(rng, p.bank_mean_deg, p.bank_sd_deg), 8.0, 55.0);
  d.slide = std::max(40.0, draw_gamma(rng, p.slide_mean_m, p.slide_sd_m));
  d.ctrl = std::clamp(draw_gamma(rng, p.control_noise, p.control_noise_sd), 0.02, 3.0);
  d.M = draw_gamma(rng, p.lateral_mean_m, p.lateral_mean_sd_m);
  d.S = draw_gamma(rng, p.lateral_spread_m, p.lateral_spread_sd_m);
  d.vert_sd = draw_gamma(rng, p.vertical_noise_m, p.vertical_noise_sd_m);
  d.wave_phase = rng.uniform();
  const double alphas[3] = {0.9, 0.8, 0.6};
  double scale = 1.0 / std::sqrt((0.81 + 0.64 + 0.36) / 2.0);
  for (int j = 0; j < 3; ++j) {
    d.vert_amp[j] = d.vert_sd * scale * alphas[j];
    d.vert_phi[j] = rng.uniform(0.0, 2.0 * kPi);
  }
  for (double& phi : d.ctrl_phi) phi = rng.uniform(0.0, 2.0 * kPi);

  // AGL threshold crossings; simulated time is stretched so the extracted
  // takeoff-to-touchdown interval recovers the drawn target.
  double lo = 0.01, hi = 6.0;
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    (climb_height(mid, d.climb) < 0.5 ? lo : hi) = mid;
  }
  d.u_cross_up = 0.5 * (lo + hi);
  d.T = d.T_target + d.u_cross_up + 0.5 / d.td_sink;

  // Pattern altitude feasible for this flight time, then descent entry such
  // that the altitude integral reaches exactly zero at touchdown.
  double balanced = d.climb * d.sink / (d.climb + d.sink);
  d.pattern_alt = std::clamp(0.8 * (d.T - 30.0) * balanced, 30.0, 300.0);
  for (int pass = 0; pass < 3; ++pass) {
    d.u_level = d.pattern_alt / d.climb + 3.0;
    double drop_ramp = 2.5 * d.sink;                        // 5 s entry blend
    double drop_flare = 1.5 * (d.sink + d.td_sink);         // 3 s flare blend
    d.u_descend = d.T - 8.0 - (d.pattern_alt - drop_ramp - drop_flare) / d.sink;
    if (d.u_descend >= d.u_level + 14.0) break;
    d.pattern_alt = std::max(30.0, 0.8 * d.pattern_alt);
  }
  return d;
}

// Planned vertical speed and height above field at airborne time u.
void plan_altitude(const FlightDraws& d, double u, double* h, double* vs) {
  if (u <= 0.0) {
    *h = 0.0;
    *vs = 0.0;
    return;
  }
  double a = d.u_level - 4.0, b = d.u_level + 4.0;
  if (u < a) {
    *h = climb_height(u, d.climb);
    *vs = d.climb * (u < 6.0 ? rise(u / 6.0) : 1.0);
  } else if (u < b) {
    double x = u - a;
    *h = climb_height(a, d.climb) + d.climb * (x - rise_integral(x, 8.0));
    *vs = d.climb * (1.0 - rise(x / 8.0));
  } else if (u < d.u_descend) {
    *h = d.pattern_alt;
    *vs = 0.0;
  } else if (u < d.u_descend + 5.0) {
    double x = u - d.u_descend;
    *h = d.pattern_alt - d.sink * rise_integral(x, 5.0);
    *vs = -d.sink * rise(x / 5.0);
  } else if (u < d.T - 3.0) {
    *h = d.pattern_alt - 2.5 * d.sink - d.sink * (u - d.u_descend - 5.0);
    *vs = -d.sink;
  } else if (u < d.T) {
    double x = u - (d.T - 3.0);
    double h0 = d.pattern_alt - 2.5 * d.sink - d.sink * (d.T - 3.0 - d.u_descend - 5.0);
    *h = h0 - d.sink * x - (d.td_sink - d.sink) * rise_integral(x, 3.0);
    *vs = -(d.sink + (d.td_sink - d.sink) * rise(x / 3.0));
  } else {
    *h = 0.0;
    *vs = 0.0;
  }
  if (*h < 0.0) *h = 0.0;
}

// Planned ground speed at airborne time u.
double plan_speed(const FlightDraws& d, double u) {
  double v = kRotateSpeed + (d.v_cruise - kRotateSpeed) * rise(u / 45.0);
  v *= 1.0 - 0.2 * rise((u - (d.T - 60.0)) / 30.0);
  return v;
}

double pitch_plan(const FlightDraws& d, double u) {
  // Rotation, climb, cruise, approach, flare plateau, all cosine-blended.
  // Ground contact is detected when AGL crosses the threshold, roughly
  // 0.5/td_sink seconds before the scripted touchdown, so the flare plateau
  // is anchored there: it must already hold the drawn landing pitch when the
  // 1-second-before-touchdown probe samples it.
  double hold_from = d.T - 0.5 / d.td_sink - 2.0;
  double pitch = 0.8;
  pitch += (8.0 - pitch) * rise((u + 1.0) / 4.0);
  pitch += (d.cruise_pitch - 8.0) * rise((u - (d.u_level - 4.0)) / 8.0);
  pitch += (d.app_pitch - d.cruise_pitch) * rise((u - d.u_descend) / 5.0);
  pitch += (d.land_pitch - d.app_pitch) * rise((u - hold_from) / 0.4);
  return pitch;
}

FlightStream generate_flight(const ClassProfile& profile, const FlightDraws& d, double flight_hz,
                             double* t_end_out) {
  double t_rot = kHoldS + kRotateSpeed / kGroundAccel;
  double roll_dist = kRotateSpeed * kRotateSpeed / (2.0 * kGroundAccel);
  double t_td = t_rot + d.T;
  double v_td = plan_speed(d, d.T);
  // The measured ground roll starts at the AGL threshold crossing, about
  // 0.5/td_sink s of residual flight early; shorten the braking distance so
  // the extracted slide length matches the drawn target.
  double slide = std::max(30.0, d.slide - v_td * (0.5 / d.td_sink));
  double brake = v_td * v_td / (2.0 * slide);
  double t_stop = t_td + v_td / brake;
  double t_end = t_stop + kParkTailS;
  *t_end_out = t_end;

  // Arc length along the centerline at fine, rate-independent resolution.
  const double du = 1.0 / 240.0;
  size_t n_fine = static_cast<size_t>(std::ceil(d.T / du)) + 1;
  std::vector<double> s_fine(n_fine);
  s_fine[0] = 0.0;
  for (size_t i = 1; i < n_fine; ++i) {
    double u0 = std::min(d.T, (static_cast<double>(i) - 1.0) * du);
    double u1 = std::min(d.T, static_cast<double>(i) * du);
    s_fine[i] = s_fine[i - 1] + 0.5 * (plan_speed(d, u0) + plan_speed(d, u1)) * (u1 - u0);
  }
  auto arc_at = [&](double u) {
    u = std::clamp(u, 0.0, d.T);
    double x = u / du;
    size_t i = std::min(static_cast<size_t>(x), n_fine - 2);
    double f = x - static_cast<double>(i);
    return s_fine[i] + f * (s_fine[i + 1] - s_fine[i]);
  };
  PatternPath path = build_pattern(s_fine[n_fine - 1]);

  double extracted_span = d.T_target;
  DeviationWave wave = solve_wave(d.M, d.S, extracted_span, d.T, d.wave_phase);

  auto vert_noise = [&](double u, double* z, double* dz) {
    const double periods[3] = {31.0, 47.0, 71.0};
    *z = 0.0;
    *dz = 0.0;
    for (int j = 0; j < 3; ++j) {
      double w = 2.0 * kPi / periods[j];
      *z += d.vert_amp[j] * std::sin(w * u + d.vert_phi[j]);
      *dz += d.vert_amp[j] * w * std::cos(w * u + d.vert_phi[j]);
    }
  };

  size_t n = static_cast<size_t>(std::floor(t_end * flight_hz)) + 1;
  FlightStream out(n);
  for (size_t k = 0; k < n; ++k) {
    double t = static_cast<double>(k) / flight_hz;
    FlightSample& fs = out[k];
    fs.t = t;

    double x = 0.0, y = 0.0, h = 0.0, vs = 0.0, v = 0.0;
    double ref_x = 0.0, ref_y = 0.0, ref_h = 0.0;
    double heading = 0.0, bank_roll = 0.0, pitch;
    double u = t - t_rot;

    if (t < kHoldS) {
      y = -roll_dist;
      pitch = 0.8;
    } else if (u < 0.0) {
      double w = t - kHoldS;
      v = kGroundAccel * w;
      y = -roll_dist + 0.5 * kGroundAccel * w * w;
      pitch = pitch_plan(d, u);
    } else if (u < d.T) {
      double s = arc_at(u);
      PathPoint pp = path.at(s);
      heading = pp.heading;
      ref_x = pp.x;
      ref_y = pp.y;
      v = plan_speed(d, u);
      plan_altitude(d, u, &h, &vs);
      ref_h = h;
      double mag, side;
      wave.eval(u, &mag, &side);
      x = pp.x + side * mag * (-std::cos(heading));
      y = pp.y + side * mag * std::sin(heading);
      double wv = rise((u - 4.0) / 8.0) * (1.0 - rise((u - (d.T - 16.0)) / 8.0));
      double dwv = 0.0;
      {
        // Envelope slope, analytic: rise'(x/w) = (pi/2w) sin(pi x / w).
        double r1 = rise((u - 4.0) / 8.0), r2 = rise((u - (d.T - 16.0)) / 8.0);
        double d1 = (u > 4.0 && u < 12.0) ? (kPi / 16.0) * std::sin(kPi * (u - 4.0) / 8.0) : 0.0;
        double d2 = (u > d.T - 16.0 && u < d.T - 8.0)
                        ? (kPi / 16.0) * std::sin(kPi * (u - (d.T - 16.0)) / 8.0)
                        : 0.0;
        dwv = d1 * (1.0 - r2) - r1 * d2;
      }
      double z, dz;
      vert_noise(u, &z, &dz);
      h = std::max(0.0, h + wv * z);
      vs += wv * dz + dwv * z;
      bank_roll = d.bank * path.bank_shape(s);
      pitch = pitch_plan(d, u);
    } else {
      double w = u - d.T;
      double vv = std::max(0.0, v_td - brake * w);
      double dist = v_td * w - 0.5 * brake * w * w;
      if (vv <= 0.0) dist = slide;
      v = vv;
      x = 0.0;
      y = std::min(dist, slide);
      double derote = rise(w / 2.0);
      pitch = d.land_pitch + (0.4 - d.land_pitch) * derote;
    }

    fs.agl = std::max(0.0, h);
    fs.asl = fs.agl + kFieldElev;
    fs.vertical_speed = vs;
    fs.gs = v;
    double uu = std::max(0.0, u);
    fs.tas = v * 1.03 + 1.2 + 0.35 * std::sin(2.0 * kPi * uu / 23.7 + d.ctrl_phi[0]);
    double weave = (u > 0.0 && u < d.T) ? d.ctrl * 1.2 * std::sin(2.0 * kPi * uu / 13.7 + d.ctrl_phi[1])
                                        : 0.0;
    double yaw = heading / kDeg + weave;
    while (yaw > 180.0) yaw -= 360.0;
    while (yaw <= -180.0) yaw += 360.0;
    fs.yaw = yaw;
    fs.roll = std::clamp(bank_roll + 0.8 * weave, -179.0, 179.0);
    fs.pitch = std::clamp(pitch, -179.0, 179.0);
    double fpa = std::atan2(vs, std::max(v, 1.0)) / kDeg;
    fs.aoa = fs.pitch - fpa + profile.aoa_offset_deg +
             d.ctrl * 0.4 * std::sin(2.0 * kPi * uu / 10.3 + d.ctrl_phi[2]);
    fs.elevator_input = std::clamp(
        0.02 * (fs.pitch - d.cruise_pitch) + d.ctrl * 0.06 * std::sin(2.0 * kPi * uu / 9.1 + d.ctrl_phi[3]),
        -1.0, 1.0);
    fs.rudder_input = std::clamp(
        0.02 * fs.roll / 30.0 + d.ctrl * 0.05 * std::sin(2.0 * kPi * uu / 7.7 + d.ctrl_phi[4]),
        -1.0, 1.0);
    fs.roll_input = std::clamp(
        0.015 * fs.roll + d.ctrl * 0.05 * std::sin(2.0 * kPi * uu / 8.3 + d.ctrl_phi[5]), -1.0,
        1.0);

    double cos_lat = std::cos(kLat0 * kDeg);
    fs.longitude = kLon0 + x / (cos_lat * kMeterPerDeg);
    fs.latitude = kLat0 + y / kMeterPerDeg;
    if (u >= 0.0 && u < d.T) {
      fs.ref_longitude = kLon0 + ref_x / (cos_lat * kMeterPerDeg);
      fs.ref_latitude = kLat0 + ref_y / kMeterPerDeg;
      fs.ref_height = ref_h + kFieldElev;
    } else {
      fs.ref_longitude = fs.longitude;
      fs.ref_latitude = fs.latitude;
      fs.ref_height = kFieldElev;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gaze generation: Markov visit chain over per-AOI anchor directions with
// Ornstein-Uhlenbeck angular jitter inside visits.

struct Anchor {
  double az, el;  // degrees; azimuth positive right, elevation positive up
};

const std::array<Anchor, kAoiCount>& anchor_table() {
  static const std::array<Anchor, kAoiCount> table = {{
      {-20.0, -19.0},  // aircraft clocks
      {-9.0, -20.0},   // airspeed indicator
      {0.0, -20.0},    // attitude indicator
      {9.0, -27.0},    // vertical speed indicator
      {0.0, -27.0},    // radio compass
      {19.0, -26.0},   // inlet pressure gauge
      {9.0, -20.0},    // altitude indicator
      {-9.0, -27.0},   // turn and slip indicator
      {-14.0, -33.0},  // tri-use meter
      {-26.0, -29.0},  // magnetic course correction calculator
      {19.0, -19.0},   // tachometer
      {26.0, -22.0},   // cylinder head thermometer
      {26.0, -29.0},   // air inlet temperature indicator
      {-26.0, -22.0},  // current and voltage meters
      {-19.0, -27.0},  // tank pressure gauge
      {0.0, -12.0},    // spare magnetic compass
      {-55.0, 3.0},    // left cockpit glass
      {0.0, 5.0},      // front cockpit glass
      {55.0, 3.0},     // right cockpit glass
  }};
  return table;
}

Vec3 dir_from_angles(double az_deg, double el_deg) {
  double az = az_deg * kDeg, el = el_deg * kDeg;
  return {std::sin(az) * std::cos(el), std::sin(el), std::cos(az) * std::cos(el)};
}

struct GazeDraws {
  std::array<double, kAoiCount> shares{};
  std::array<double, kAoiCount> anchor_az{}, anchor_el{};
  double visit_scale = 1.0;
  double eye_open = 0.85;
  double vergence = 0.35;
  Vec3 origin_left, origin_right;
  double pupil_phi[4] = {0, 0, 0, 0};
};

GazeDraws make_gaze_draws(const ClassProfile& p, Rng& rng) {
  GazeDraws g;
  // Targeted shares (nonzero SD) draw to their configured moments; the rest
  // split the remaining probability in jittered proportion to their means.
  double targeted = 0.0;
  std::array<double, kAoiCount> pool{};
  double pool_mean = 0.0;
  for (size_t a = 0; a < kAoiCount; ++a) {
    if (p.aoi_share_sd[a] > 0.0) {
      g.shares[a] = draw_gamma(rng, p.aoi_share_mean[a], p.aoi_share_sd[a]);
      targeted += g.shares[a];
    } else {
      pool[a] = p.aoi_share_mean[a] * draw_gamma(rng, 1.0, 0.35);
      pool_mean += p.aoi_share_mean[a];
    }
  }
  if (targeted > 0.92 && pool_mean > 0.0) {
    for (size_t a = 0; a < kAoiCount; ++a)
      if (p.aoi_share_sd[a] > 0.0) g.shares[a] *= 0.92 / targeted;
    targeted = 0.92;
  }
  double pool_total = 0.0;
  for (double w : pool) pool_total += w;
  double remainder = std::max(0.0, 1.0 - targeted);
  if (pool_total > 0.0) {
    for (size_t a = 0; a < kAoiCount; ++a) g.shares[a] += remainder * pool[a] / pool_total;
  } else {
    double total = targeted > 0.0 ? targeted : 1.0;
    for (double& s : g.shares) s = (targeted > 0.0 ? s / total : 1.0 / kAoiCount);
  }

  const auto& anchors = anchor_table();
  for (size_t a = 0; a < kAoiCount; ++a) {
    g.anchor_az[a] = anchors[a].az + draw_normal(rng, 0.0, 0.6);
    g.anchor_el[a] = anchors[a].el + draw_normal(rng, 0.0, 0.6);
  }
  g.visit_scale = std::exp(draw_normal(rng, 0.0, p.visit_scale_sd));
  g.eye_open = std::clamp(draw_normal(rng, p.eye_open_mean, p.eye_open_sd), 0.5, 0.98);
  g.vergence = std::clamp(draw_normal(rng, 0.35, 0.10), 0.05, 0.8);
  g.origin_left = {-31.5 + draw_normal(rng, 0.0, 1.0), -1.5 + draw_normal(rng, 0.0, 1.0),
                   9.0 + draw_normal(rng, 0.0, 1.5)};
  g.origin_right = {31.5 + draw_normal(rng, 0.0, 1.0), -1.5 + draw_normal(rng, 0.0, 1.0),
                    9.0 + draw_normal(rng, 0.0, 1.5)};
  for (double& phi : g.pupil_phi) phi = rng.uniform(0.0, 2.0 * kPi);
  return g;
}

GazeStream generate_gaze(const ClassProfile& p, const GazeDraws& g, Rng& rng, double gaze_hz,
                         double t_end) {
  // Visit chain: every transition row equals the participant's share vector,
  // so the stationary dwell distribution matches it by construction.
  std::vector<double> row(g.shares.begin(), g.shares.end());
  struct Visit {
    double end;
    size_t aoi;
  };
  std::vector<Visit> visits;
  double cursor = 0.0;
  size_t state = rng.weighted(row);
  while (cursor < t_end + 1.0) {
    double dwell = rng.gamma(4.0, p.aoi_dwell_mean_s[state] * g.visit_scale / 4.0);
    dwell = std::max(dwell, 1e-4);
    cursor += dwell;
    visits.push_back({cursor, state});
    state = rng.weighted(row);
  }

  double dt = 1.0 / gaze_hz;
  double jitter_decay = std::exp(-dt / 0.8);
  double jitter_step = p.gaze_jitter_deg * std::sqrt(1.0 - jitter_decay * jitter_decay);
  double eo_decay = std::exp(-dt / 3.0);
  double eo_step = 0.012 * std::sqrt(1.0 - eo_decay * eo_decay);

  size_t n = static_cast<size_t>(std::floor(t_end * gaze_hz)) + 1;
  GazeStream out(n);
  size_t vi = 0;
  double jaz = 0.0, jel = 0.0, eo = 0.0;
  for (size_t k = 0; k < n; ++k) {
    double t = static_cast<double>(k) / gaze_hz;
    while (vi + 1 < visits.size() && t >= visits[vi].end) ++vi;
    size_t aoi = visits[vi].aoi;

    jaz = jaz * jitter_decay + jitter_step * rng.normal();
    jel = jel * jitter_decay + jitter_step * rng.normal();
    eo = eo * eo_decay + eo_step * rng.normal();

    GazeSample& s = out[k];
    s.t = t;
    double az = g.anchor_az[aoi] + jaz;
    double el = g.anchor_el[aoi] + jel;
    s.dir_left = dir_from_angles(az + 0.5 * g.vergence, el);
    s.dir_right = dir_from_angles(az - 0.5 * g.vergence, el);
    s.origin_left = g.origin_left;
    s.origin_right = g.origin_right;
    double open = std::clamp(g.eye_open + eo, 0.0, 1.0);
    s.eye_open_left = open;
    s.eye_open_right = std::clamp(open - 0.004, 0.0, 1.0);
    s.pupil_left_x = 0.08 * std::sin(2.0 * kPi * t / 41.0 + g.pupil_phi[0]);
    s.pupil_left_y = 0.08 * std::sin(2.0 * kPi * t / 53.0 + g.pupil_phi[1]);
    s.pupil_right_x = 0.08 * std::sin(2.0 * kPi * t / 43.0 + g.pupil_phi[2]);
    s.pupil_right_y = 0.08 * std::sin(2.0 * kPi * t / 59.0 + g.pupil_phi[3]);
    s.aoi = all_aois()[aoi];
  }
  return out;
}

void validate_profile(const ClassProfile& p) {
  if (!(p.flight_time_mean_s > 0.0) || !(p.cruise_speed_ms > 0.0) || !(p.climb_rate_ms > 0.0))
    throw ValidationError("profile: flight time, cruise speed and climb rate must be positive");
  if (p.flight_time_sd_s < 0.0 || p.lateral_mean_m < 0.0 || p.lateral_mean_sd_m < 0.0 ||
      p.lateral_spread_m < 0.0 || p.lateral_spread_sd_m < 0.0 || p.vertical_noise_m < 0.0 ||
      p.vertical_noise_sd_m < 0.0 || p.gaze_jitter_deg < 0.0 || p.visit_scale_sd < 0.0)
    throw ValidationError("profile: noise scales must be non-negative");
  double share_sum = 0.0;
  for (size_t a = 0; a < kAoiCount; ++a) {
    if (!(p.aoi_dwell_mean_s[a] > 0.0))
      throw ValidationError("profile: AOI dwell means must be positive");
    if (p.aoi_share_mean[a] < 0.0) throw ValidationError("profile: AOI shares must be non-negative");
    share_sum += p.aoi_share_mean[a];
  }
  if (std::abs(share_sum - 1.0) > 1e-6)
    throw ValidationError(strprintf("profile: AOI shares sum to %.9g, expected 1", share_sum));
}

}  // namespace

std::array<std::array<double, kAoiCount>, kAoiCount> ClassProfile::transition_matrix() const {
  std::array<std::array<double, kAoiCount>, kAoiCount> m{};
  double total = 0.0;
  for (double s : aoi_share_mean) total += s;
  for (size_t i = 0; i < kAoiCount; ++i)
    for (size_t j = 0; j < kAoiCount; ++j)
      m[i][j] = total > 0.0 ? aoi_share_mean[j] / total : 1.0 / kAoiCount;
  return m;
}

ParticipantRecord generate_participant(const ClassProfile& profile, int label, uint64_t seed,
                                       double gaze_hz, double flight_hz) {
  validate_profile(profile);
  if (!(gaze_hz > 0.0) || !(flight_hz > 0.0))
    throw ValidationError("sample rates must be positive");

  ParticipantRecord rec;
  rec.label = label;
  rec.id = strprintf("%c%08llx", label == 1 ? 'e' : 'n',
                     static_cast<unsigned long long>(seed & 0xffffffffull));

  Rng flight_rng(derive_seed(seed, "flight"));
  FlightDraws draws = make_flight_draws(profile, flight_rng);
  double t_end = 0.0;
  rec.flight = generate_flight(profile, draws, flight_hz, &t_end);

  Rng gaze_rng(derive_seed(seed, "gaze"));
  GazeDraws gdraws = make_gaze_draws(profile, gaze_rng);
  rec.gaze = generate_gaze(profile, gdraws, gaze_rng, gaze_hz, t_end);
  return rec;
}

std::pair<ClassProfile, ClassProfile> default_profiles() {
  auto idx = [](Aoi a) { return static_cast<size_t>(a); };

  struct ShareSpec {
    Aoi aoi;
    double mean, sd;
  };
  // Instrument-share targets with across-participant spread; everything else
  // splits the remainder in fixed proportion.
  auto fill_shares = [&](ClassProfile& p, const std::vector<ShareSpec>& targeted,
                         const std::vector<ShareSpec>& pool) {
    double targeted_sum = 0.0;
    for (const auto& t : targeted) {
      p.aoi_share_mean[idx(t.aoi)] = t.mean;
      p.aoi_share_sd[idx(t.aoi)] = t.sd;
      targeted_sum += t.mean;
    }
    double pool_sum = 0.0;
    for (const auto& w : pool) pool_sum += w.mean;
    for (const auto& w : pool)
      p.aoi_share_mean[idx(w.aoi)] = (1.0 - targeted_sum) * w.mean / pool_sum;
  };

  ClassProfile expert;
  expert.flight_time_mean_s = 759.06;
  expert.flight_time_sd_s = 163.58;
  expert.cruise_speed_ms = 50.0;
  expert.cruise_speed_sd_ms = 2.2;
  expert.climb_rate_ms = 4.0;
  expert.approach_sink_mean_ms = 2.6;
  expert.approach_sink_sd_ms = 0.45;
  expert.touchdown_sink_mean_ms = 0.75;
  expert.touchdown_sink_sd_ms = 0.22;
  expert.landing_pitch_mean_deg = 3.97;
  expert.landing_pitch_sd_deg = 24.43;
  expert.approach_pitch_mean_deg = -2.0;
  expert.approach_pitch_sd_deg = 1.2;
  expert.bank_mean_deg = 24.0;
  expert.bank_sd_deg = 2.5;
  expert.slide_mean_m = 190.0;
  expert.slide_sd_m = 42.0;
  expert.control_noise = 0.35;
  expert.control_noise_sd = 0.08;
  expert.aoa_offset_deg = 2.0;
  expert.lateral_mean_m = 176.67;
  expert.lateral_mean_sd_m = 205.52;
  expert.lateral_spread_m = 211.52;
  expert.lateral_spread_sd_m = 225.76;
  expert.vertical_noise_m = 2.2;
  expert.vertical_noise_sd_m = 0.7;
  expert.visit_scale_sd = 0.15;
  expert.gaze_jitter_deg = 0.15;
  expert.eye_open_mean = 0.875;
  expert.eye_open_sd = 0.035;
  expert.aoi_dwell_mean_s.fill(0.85);
  fill_shares(expert,
              {{Aoi::kAirspeedIndicator, 0.0856, 0.0545},
               {Aoi::kAttitudeIndicator, 0.2515, 0.0923},
               {Aoi::kVerticalSpeedIndicator, 0.1311, 0.0884},
               {Aoi::kAltitudeIndicator, 0.0283, 0.0229}},
              {{Aoi::kAircraftClocks, 0.030, 0},
               {Aoi::kRadioCompass, 0.045, 0},
               {Aoi::kInletPressureGauge, 0.025, 0},
               {Aoi::kTurnAndSlipIndicator, 0.050, 0},
               {Aoi::kAircraftTriUseMeter, 0.030, 0},
               {Aoi::kMagneticCourseCorrectionCalculator, 0.020, 0},
               {Aoi::kTachometer, 0.050, 0},
               {Aoi::kCylinderHeadThermometer, 0.020, 0},
               {Aoi::kAirInletTemperatureIndicator, 0.020, 0},
               {Aoi::kCurrentAndVoltageMeters, 0.025, 0},
               {Aoi::kTankPressureGauge, 0.020, 0},
               {Aoi::kSpareMagneticCompass, 0.030, 0},
               {Aoi::kLeftCockpitGlass, 0.050, 0},
               {Aoi::kFrontCockpitGlass, 0.460, 0},
               {Aoi::kRightCockpitGlass, 0.035, 0}});

  ClassProfile novice;
  novice.flight_time_mean_s = 902.32;
  novice.flight_time_sd_s = 336.73;
  novice.cruise_speed_ms = 46.0;
  novice.cruise_speed_sd_ms = 2.5;
  novice.climb_rate_ms = 3.4;
  novice.approach_sink_mean_ms = 3.6;
  novice.approach_sink_sd_ms = 0.7;
  novice.touchdown_sink_mean_ms = 1.6;
  novice.touchdown_sink_sd_ms = 0.45;
  novice.landing_pitch_mean_deg = -12.54;
  novice.landing_pitch_sd_deg = 29.03;
  novice.approach_pitch_mean_deg = -4.5;
  novice.approach_pitch_sd_deg = 1.6;
  novice.bank_mean_deg = 30.0;
  novice.bank_sd_deg = 3.5;
  novice.slide_mean_m = 330.0;
  novice.slide_sd_m = 85.0;
  novice.control_noise = 0.80;
  novice.control_noise_sd = 0.16;
  novice.aoa_offset_deg = 2.8;
  novice.lateral_mean_m = 873.89;
  novice.lateral_mean_sd_m = 818.43;
  novice.lateral_spread_m = 675.78;
  novice.lateral_spread_sd_m = 589.07;
  novice.vertical_noise_m = 5.0;
  novice.vertical_noise_sd_m = 1.6;
  novice.visit_scale_sd = 0.22;
  novice.gaze_jitter_deg = 0.35;
  novice.eye_open_mean = 0.845;
  novice.eye_open_sd = 0.045;
  novice.aoi_dwell_mean_s.fill(1.35);
  fill_shares(novice,
              {{Aoi::kAirspeedIndicator, 0.0532, 0.0498},
               {Aoi::kAttitudeIndicator, 0.3103, 0.1220},
               {Aoi::kVerticalSpeedIndicator, 0.0533, 0.0411},
               {Aoi::kAltitudeIndicator, 0.0134, 0.0222}},
              {{Aoi::kAircraftClocks, 0.025, 0},
               {Aoi::kRadioCompass, 0.030, 0},
               {Aoi::kInletPressureGauge, 0.020, 0},
               {Aoi::kTurnAndSlipIndicator, 0.030, 0},
               {Aoi::kAircraftTriUseMeter, 0.025, 0},
               {Aoi::kMagneticCourseCorrectionCalculator, 0.020, 0},
               {Aoi::kTachometer, 0.035, 0},
               {Aoi::kCylinderHeadThermometer, 0.020, 0},
               {Aoi::kAirInletTemperatureIndicator, 0.020, 0},
               {Aoi::kCurrentAndVoltageMeters, 0.020, 0},
               {Aoi::kTankPressureGauge, 0.020, 0},
               {Aoi::kSpareMagneticCompass, 0.025, 0},
               {Aoi::kLeftCockpitGlass, 0.050, 0},
               {Aoi::kFrontCockpitGlass, 0.560, 0},
               {Aoi::kRightCockpitGlass, 0.040, 0}});

  return {expert, novice};
}

CohortSpec::CohortSpec() {
  auto profiles = default_profiles();
  expert = profiles.first;
  novice = profiles.second;
}

std::vector<ManifestEntry> generate_cohort(const CohortSpec& spec, const std::string& out_dir,
                                           int jobs) {
  if (spec.n_expert < 1 || spec.n_novice < 1)
    throw ValidationError("cohort needs at least one participant per class");
  if (!(spec.gaze_hz > 0.0) || !(spec.flight_hz > 0.0))
    throw ValidationError("sample rates must be positive");
  validate_profile(spec.expert);
  validate_profile(spec.novice);

  std::filesystem::create_directories(out_dir);
  size_t total = spec.n_expert + spec.n_novice;
  int width = 2;
  for (size_t v = std::max(spec.n_expert, spec.n_novice); v >= 100; v /= 10) ++width;

  std::vector<ManifestEntry> entries(total);
  for (size_t i = 0; i < total; ++i) {
    bool is_expert = i < spec.n_expert;
    size_t ordinal = is_expert ? i + 1 : i - spec.n_expert + 1;
    ManifestEntry& e = entries[i];
    e.id = strprintf("%c%0*zu", is_expert ? 'e' : 'n', width, ordinal);
    e.label = is_expert ? 1 : 0;
    e.gaze_path = e.id + "_gaze.csv";
    e.flight_path = e.id + "_flight.csv";
  }

  std::filesystem::path base(out_dir);
  parallel_for(total, jobs, [&](size_t i) {
    bool is_expert = i < spec.n_expert;
    uint64_t pseed = derive_seed(spec.seed, "participant", i);
    ParticipantRecord rec = generate_participant(is_expert ? spec.expert : spec.novice,
                                                 is_expert ? 1 : 0, pseed, spec.gaze_hz,
                                                 spec.flight_hz);
    rec.id = entries[i].id;
    write_gaze_log((base / entries[i].gaze_path).string(), rec.gaze);
    write_flight_log((base / entries[i].flight_path).string(), rec.flight);
  });
  write_manifest((base / "manifest.csv").string(), entries);
  return entries;
}

}  // namespace skyselect
