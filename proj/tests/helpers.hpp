// Shared construction helpers for the unit tests.
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "skyselect/dataset.hpp"
#include "skyselect/telemetry.hpp"

namespace testutil {

using namespace skyselect;

// Unit vector rotated `deg` degrees from +z within the x-z plane.
inline Vec3 dir_deg(double deg) {
  const double r = deg * 3.14159265358979323846 / 180.0;
  return {std::sin(r), 0.0, std::cos(r)};
}

inline GazeSample gaze_at(double t, Vec3 dir, Aoi aoi = Aoi::kNone, double eol = 1.0) {
  GazeSample s;
  s.t = t;
  s.origin_left = {-30.0, 0.0, 0.0};
  s.origin_right = {30.0, 0.0, 0.0};
  s.dir_left = dir;
  s.dir_right = dir;
  s.eye_open_left = eol;
  s.eye_open_right = eol;
  s.aoi = aoi;
  return s;
}

// n samples at a fixed direction, dt apart, starting at t0.
inline GazeStream constant_gaze(size_t n, double dt, Vec3 dir, double t0 = 0.0,
                                Aoi aoi = Aoi::kNone) {
  GazeStream g;
  for (size_t i = 0; i < n; ++i) g.push_back(gaze_at(t0 + static_cast<double>(i) * dt, dir, aoi));
  return g;
}

// Feature matrix from explicit rows; column names default to f0, f1, ...
inline FeatureMatrix make_matrix(const std::vector<std::vector<double>>& rows,
                                 const std::vector<int>& labels,
                                 std::vector<std::string> columns = {}) {
  FeatureMatrix m;
  if (columns.empty())
    for (size_t c = 0; c < rows.at(0).size(); ++c) columns.push_back("f" + std::to_string(c));
  m.columns = std::move(columns);
  m.labels = labels;
  for (size_t r = 0; r < rows.size(); ++r) {
    m.ids.push_back("p" + std::to_string(r));
    for (double v : rows[r]) m.values.push_back(v);
  }
  return m;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Self-cleaning unique temp directory.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("skyselect_test_" + tag + "_" + std::to_string(++counter));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string str(const std::string& name = "") const {
    return name.empty() ? path.string() : (path / name).string();
  }
};

}  // namespace testutil
