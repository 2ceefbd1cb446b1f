#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "skyselect/aoi.hpp"

namespace skyselect {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) {
  double n = norm(a);
  return n > 0.0 ? Vec3{a.x / n, a.y / n, a.z / n} : a;
}

// One eye-tracker sample. Directions are unitless with components in [-1, 1];
// a zero direction (tracking loss / blink) is representable and is skipped by
// fixation detection rather than rejected at parse time.
struct GazeSample {
  double t = 0.0;  // seconds, strictly increasing within a stream
  Vec3 origin_left, origin_right;  // mm
  Vec3 dir_left, dir_right;
  double eye_open_left = 0.0, eye_open_right = 0.0;  // clamped to [0, 1]
  double pupil_left_x = 0.0, pupil_left_y = 0.0;     // [-1, 1]
  double pupil_right_x = 0.0, pupil_right_y = 0.0;
  Aoi aoi = Aoi::kNone;
};

// One flight-dynamics sample; angles in degrees, speeds m/s, altitudes m.
// nearest_ref_* is the closest point of the briefed reference path, logged by
// the simulator alongside the aircraft state.
struct FlightSample {
  double t = 0.0;
  double roll = 0.0, pitch = 0.0, yaw = 0.0;
  double longitude = 0.0, latitude = 0.0;
  double agl = 0.0, asl = 0.0;
  double tas = 0.0, gs = 0.0;
  double vertical_speed = 0.0;
  double aoa = 0.0;
  double rudder_input = 0.0, elevator_input = 0.0, roll_input = 0.0;
  double ref_longitude = 0.0, ref_latitude = 0.0, ref_height = 0.0;
};

using GazeStream = std::vector<GazeSample>;
using FlightStream = std::vector<FlightSample>;

struct ParticipantRecord {
  std::string id;
  int label = 0;  // 1 = expert, 0 = novice
  GazeStream gaze;
  FlightStream flight;
};

using Cohort = std::vector<ParticipantRecord>;

struct ManifestEntry {
  std::string id;
  int label = 0;
  std::string gaze_path;    // as written in the manifest (relative allowed)
  std::string flight_path;
};

// Parsers validate: strictly increasing timestamps (equal timestamps are an
// error, not a merge), direction/pupil components in [-1, 1], AGL >= -0.5 m,
// |roll| and |pitch| <= 180. Eye-opening values are clamped to [0, 1].
// Column order is free; names are fixed; extra columns are ignored.
GazeStream parse_gaze_log(const std::string& path);
FlightStream parse_flight_log(const std::string& path);

// Serializers emit the canonical column order with 9-significant-digit
// numbers; serialize(parse(f)) == f field-for-field for files they produced.
void write_gaze_log(const std::string& path, const GazeStream& stream);
void write_flight_log(const std::string& path, const FlightStream& stream);

// Manifest schema: participant_id,label,gaze_path,flight_path. Labels must be
// 0 or 1; duplicate ids are an error. Paths are kept verbatim here.
std::vector<ManifestEntry> parse_manifest(const std::string& path);
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);

// Loads every participant named by the manifest; relative stream paths are
// resolved against the manifest's directory. All-or-nothing: the first bad
// stream aborts the load with an error naming the participant.
Cohort load_cohort(const std::string& manifest_path);

}  // namespace skyselect
