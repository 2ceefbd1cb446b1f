#include <algorithm>
#include <cmath>

#include "skyselect/common.hpp"
#include "skyselect/eye_features.hpp"

namespace skyselect {

namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

double median_gap(const GazeStream& samples) {
  std::vector<double> gaps;
  gaps.reserve(samples.size() - 1);
  for (size_t i = 0; i + 1 < samples.size(); ++i) gaps.push_back(samples[i + 1].t - samples[i].t);
  std::sort(gaps.begin(), gaps.end());
  const size_t n = gaps.size();
  return n % 2 == 1 ? gaps[n / 2] : 0.5 * (gaps[n / 2 - 1] + gaps[n / 2]);
}

// Welford keeps the running residual at exactly zero for a constant series,
// so identical samples report an sd of 0.0 rather than rounding dust.
double population_sd(const std::vector<double>& v) {
  double mean = 0.0, ss = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const double delta = v[i] - mean;
    mean += delta / static_cast<double>(i + 1);
    ss += delta * (v[i] - mean);
  }
  return std::sqrt(std::max(0.0, ss) / static_cast<double>(v.size()));
}

}  // namespace

FixationResult detect_fixations(const GazeStream& gaze, const IvtOptions& opts) {
  FixationResult result;
  // Usable samples: nonzero left-eye direction, normalized.
  std::vector<double> times;
  std::vector<Vec3> dirs;
  times.reserve(gaze.size());
  dirs.reserve(gaze.size());
  for (const GazeSample& s : gaze) {
    if (norm(s.dir_left) <= 0.0) {
      ++result.skipped_samples;
      continue;
    }
    times.push_back(s.t);
    dirs.push_back(normalized(s.dir_left));
  }
  const size_t n = times.size();
  if (n < 2) return result;

  // below[i]: the velocity over (i, i+1) is under the threshold.
  std::vector<bool> below(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    const double cosine = std::clamp(dot(dirs[i], dirs[i + 1]), -1.0, 1.0);
    const double deg = std::acos(cosine) * kRadToDeg;
    below[i] = deg / (times[i + 1] - times[i]) < opts.velocity_threshold_deg_s;
  }

  size_t i = 0;
  while (i + 1 < n) {
    if (!below[i]) {
      ++i;
      continue;
    }
    size_t j = i;  // maximal run of below-threshold pairs [i, j]
    while (j + 1 < n - 1 && below[j + 1]) ++j;
    const double duration = times[j + 1] - times[i];
    if (duration >= opts.min_duration_s) {
      Fixation fix;
      fix.start = times[i];
      fix.end = times[j + 1];
      Vec3 sum;
      for (size_t k = i; k <= j + 1; ++k) sum = sum + dirs[k];
      fix.centroid_dir = normalized(sum);
      result.fixations.push_back(fix);
    }
    i = j + 2;  // the pair after the run is above threshold (or past the end)
  }
  result.saccade_count = result.fixations.empty() ? 0 : result.fixations.size() - 1;
  return result;
}

EmFeatures extract_em_features(const GazeStream& gaze, const IvtOptions& opts) {
  if (gaze.empty()) throw DataError("em features: empty gaze stream");
  const double span = gaze.back().t - gaze.front().t;
  if (span <= 0.0) throw DataError("em features: zero-duration gaze stream");

  EmFeatures out;
  std::vector<double> xs(gaze.size()), ys(gaze.size()), zs(gaze.size());
  double eol_sum = 0.0;
  for (size_t i = 0; i < gaze.size(); ++i) {
    xs[i] = gaze[i].dir_left.x;
    ys[i] = gaze[i].dir_left.y;
    zs[i] = gaze[i].dir_left.z;
    eol_sum += gaze[i].eye_open_left;
  }
  out.sd_fix_x = population_sd(xs);
  out.sd_fix_y = population_sd(ys);
  out.sd_fix_z = population_sd(zs);
  out.eye_opening_mean = eol_sum / static_cast<double>(gaze.size());

  size_t transitions = 0;
  for (size_t i = 0; i + 1 < gaze.size(); ++i)
    transitions += gaze[i].aoi != gaze[i + 1].aoi ? 1 : 0;
  out.aoi_transition_freq = static_cast<double>(transitions) / span;

  const FixationResult fix = detect_fixations(gaze, opts);
  out.fixation_count = static_cast<double>(fix.fixations.size());
  out.saccade_count = static_cast<double>(fix.saccade_count);
  if (!fix.fixations.empty()) {
    double total = 0.0;
    for (const Fixation& f : fix.fixations) total += f.duration();
    out.fixation_duration_mean = total / static_cast<double>(fix.fixations.size()) * 1000.0;
  }
  return out;
}

AoiFeatures extract_aoi_features(const GazeStream& gaze) {
  if (gaze.empty()) throw DataError("aoi features: empty gaze stream");
  if (gaze.size() < 2 || gaze.back().t <= gaze.front().t)
    throw DataError("aoi features: zero total gaze time");

  // Sample dwell = forward gap; the last sample gets the median gap.
  const double last_dwell = median_gap(gaze);
  AoiFeatures out;
  double none = 0.0, unknown = 0.0, total = 0.0;
  std::array<double, kAoiCount> dwell{};
  for (size_t i = 0; i < gaze.size(); ++i) {
    const double w = i + 1 < gaze.size() ? gaze[i + 1].t - gaze[i].t : last_dwell;
    total += w;
    if (gaze[i].aoi == Aoi::kNone) none += w;
    else if (gaze[i].aoi == Aoi::kUnknown) unknown += w;
    else dwell[static_cast<size_t>(gaze[i].aoi)] += w;
  }
  for (size_t a = 0; a < kAoiCount; ++a) out.percent_dwell[a] = dwell[a] / total;
  out.none_share = none / total;
  out.unknown_share = unknown / total;
  return out;
}

}  // namespace skyselect
