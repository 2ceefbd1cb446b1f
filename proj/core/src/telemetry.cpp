#include "skyselect/telemetry.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <unordered_map>

#include "skyselect/common.hpp"
#include "skyselect/csv.hpp"

namespace skyselect {
namespace {

constexpr const char* kGazeColumns[] = {"timestamp", "FOL_X", "FOL_Y", "FOL_Z", "FOR_X", "FOR_Y", "FOR_Z",
                                        "FVL_X",     "FVL_Y", "FVL_Z", "FVR_X", "FVR_Y", "FVR_Z", "EOL",
                                        "EOR",       "PPLX",  "PPLY",  "PPRX",  "PPRY",  "AOIName"};

constexpr const char* kFlightColumns[] = {"timestamp",
                                          "roll",
                                          "pitch",
                                          "yaw",
                                          "longitude",
                                          "latitude",
                                          "agl",
                                          "asl",
                                          "tas",
                                          "gs",
                                          "vertical_speed",
                                          "aoa",
                                          "rudder_input",
                                          "elevator_input",
                                          "roll_input",
                                          "nearest_ref_longitude",
                                          "nearest_ref_latitude",
                                          "nearest_ref_height"};

// Maps required column names to field indices in the current file.
template <size_t N>
std::array<size_t, N> resolve_columns(CsvReader& reader, const char* const (&names)[N]) {
  if (!reader.next_row()) throw DataError(strprintf("%s: empty file", reader.path().c_str()));
  std::unordered_map<std::string, size_t> by_name;
  for (size_t i = 0; i < reader.fields().size(); ++i) {
    std::string name(trim(reader.fields()[i]));
    auto [it, fresh] = by_name.emplace(name, i);
    (void)it;
    if (!fresh) throw DataError(strprintf("%s:1: duplicate column '%s'", reader.path().c_str(), name.c_str()));
  }
  std::array<size_t, N> out{};
  for (size_t i = 0; i < N; ++i) {
    auto it = by_name.find(names[i]);
    if (it == by_name.end())
      throw DataError(strprintf("%s:1: missing required column '%s'", reader.path().c_str(), names[i]));
    out[i] = it->second;
  }
  return out;
}

double cell_number(CsvReader& reader, const std::vector<std::string_view>& f, size_t col, const char* name) {
  if (col >= f.size())
    throw DataError(strprintf("%s:%zu: row has too few fields (missing '%s')", reader.path().c_str(),
                              reader.line_number(), name));
  return parse_double_cell(f[col], strprintf("%s:%zu: column '%s'", reader.path().c_str(), reader.line_number(), name));
}

void check_range(CsvReader& reader, double v, double lo, double hi, const char* name) {
  constexpr double kEps = 1e-9;
  if (!(v >= lo - kEps && v <= hi + kEps))
    throw DataError(strprintf("%s:%zu: column '%s' value %g outside [%g, %g]", reader.path().c_str(),
                              reader.line_number(), name, v, lo, hi));
}

void check_monotone(CsvReader& reader, double t, double prev, bool first) {
  if (!first && !(t > prev))
    throw DataError(strprintf("%s:%zu: timestamp %.9g does not increase over previous %.9g", reader.path().c_str(),
                              reader.line_number(), t, prev));
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

GazeStream parse_gaze_log(const std::string& path) {
  CsvReader reader(path);
  auto col = resolve_columns(reader, kGazeColumns);
  GazeStream out;
  double prev_t = 0.0;
  bool first = true;
  while (reader.next_row()) {
    const auto& f = reader.fields();
    GazeSample s;
    s.t = cell_number(reader, f, col[0], "timestamp");
    check_monotone(reader, s.t, prev_t, first);
    prev_t = s.t;
    first = false;
    s.origin_left = {cell_number(reader, f, col[1], "FOL_X"), cell_number(reader, f, col[2], "FOL_Y"),
                     cell_number(reader, f, col[3], "FOL_Z")};
    s.origin_right = {cell_number(reader, f, col[4], "FOR_X"), cell_number(reader, f, col[5], "FOR_Y"),
                      cell_number(reader, f, col[6], "FOR_Z")};
    s.dir_left = {cell_number(reader, f, col[7], "FVL_X"), cell_number(reader, f, col[8], "FVL_Y"),
                  cell_number(reader, f, col[9], "FVL_Z")};
    s.dir_right = {cell_number(reader, f, col[10], "FVR_X"), cell_number(reader, f, col[11], "FVR_Y"),
                   cell_number(reader, f, col[12], "FVR_Z")};
    check_range(reader, s.dir_left.x, -1, 1, "FVL_X");
    check_range(reader, s.dir_left.y, -1, 1, "FVL_Y");
    check_range(reader, s.dir_left.z, -1, 1, "FVL_Z");
    check_range(reader, s.dir_right.x, -1, 1, "FVR_X");
    check_range(reader, s.dir_right.y, -1, 1, "FVR_Y");
    check_range(reader, s.dir_right.z, -1, 1, "FVR_Z");
    s.eye_open_left = clamp01(cell_number(reader, f, col[13], "EOL"));
    s.eye_open_right = clamp01(cell_number(reader, f, col[14], "EOR"));
    s.pupil_left_x = cell_number(reader, f, col[15], "PPLX");
    s.pupil_left_y = cell_number(reader, f, col[16], "PPLY");
    s.pupil_right_x = cell_number(reader, f, col[17], "PPRX");
    s.pupil_right_y = cell_number(reader, f, col[18], "PPRY");
    check_range(reader, s.pupil_left_x, -1, 1, "PPLX");
    check_range(reader, s.pupil_left_y, -1, 1, "PPLY");
    check_range(reader, s.pupil_right_x, -1, 1, "PPRX");
    check_range(reader, s.pupil_right_y, -1, 1, "PPRY");
    if (col[19] >= f.size())
      throw DataError(
          strprintf("%s:%zu: row has too few fields (missing 'AOIName')", path.c_str(), reader.line_number()));
    s.aoi = parse_aoi(f[col[19]]);
    out.push_back(s);
  }
  return out;
}

FlightStream parse_flight_log(const std::string& path) {
  CsvReader reader(path);
  auto col = resolve_columns(reader, kFlightColumns);
  FlightStream out;
  double prev_t = 0.0;
  bool first = true;
  while (reader.next_row()) {
    const auto& f = reader.fields();
    FlightSample s;
    s.t = cell_number(reader, f, col[0], "timestamp");
    check_monotone(reader, s.t, prev_t, first);
    prev_t = s.t;
    first = false;
    s.roll = cell_number(reader, f, col[1], "roll");
    s.pitch = cell_number(reader, f, col[2], "pitch");
    s.yaw = cell_number(reader, f, col[3], "yaw");
    s.longitude = cell_number(reader, f, col[4], "longitude");
    s.latitude = cell_number(reader, f, col[5], "latitude");
    s.agl = cell_number(reader, f, col[6], "agl");
    s.asl = cell_number(reader, f, col[7], "asl");
    s.tas = cell_number(reader, f, col[8], "tas");
    s.gs = cell_number(reader, f, col[9], "gs");
    s.vertical_speed = cell_number(reader, f, col[10], "vertical_speed");
    s.aoa = cell_number(reader, f, col[11], "aoa");
    s.rudder_input = cell_number(reader, f, col[12], "rudder_input");
    s.elevator_input = cell_number(reader, f, col[13], "elevator_input");
    s.roll_input = cell_number(reader, f, col[14], "roll_input");
    s.ref_longitude = cell_number(reader, f, col[15], "nearest_ref_longitude");
    s.ref_latitude = cell_number(reader, f, col[16], "nearest_ref_latitude");
    s.ref_height = cell_number(reader, f, col[17], "nearest_ref_height");
    check_range(reader, s.roll, -180, 180, "roll");
    check_range(reader, s.pitch, -180, 180, "pitch");
    check_range(reader, s.longitude, -180, 180, "longitude");
    check_range(reader, s.latitude, -90, 90, "latitude");
    if (s.agl < -0.5)
      throw DataError(strprintf("%s:%zu: column 'agl' value %g below -0.5 m", path.c_str(), reader.line_number(),
                                s.agl));
    if (s.gs < 0.0 || s.tas < 0.0)
      throw DataError(strprintf("%s:%zu: negative speed (tas=%g, gs=%g)", path.c_str(), reader.line_number(), s.tas,
                                s.gs));
    out.push_back(s);
  }
  return out;
}

void write_gaze_log(const std::string& path, const GazeStream& stream) {
  CsvWriter w(path);
  std::string header;
  for (size_t i = 0; i < std::size(kGazeColumns); ++i) {
    if (i) header += ',';
    header += kGazeColumns[i];
  }
  header += '\n';
  w.write_raw(header);
  std::string line;
  for (const auto& s : stream) {
    line.clear();
    line += fmt9(s.t);
    const double nums[] = {s.origin_left.x,  s.origin_left.y,  s.origin_left.z,  s.origin_right.x, s.origin_right.y,
                           s.origin_right.z, s.dir_left.x,     s.dir_left.y,     s.dir_left.z,     s.dir_right.x,
                           s.dir_right.y,    s.dir_right.z,    s.eye_open_left,  s.eye_open_right, s.pupil_left_x,
                           s.pupil_left_y,   s.pupil_right_x,  s.pupil_right_y};
    for (double v : nums) {
      line += ',';
      line += fmt9(v);
    }
    line += ',';
    line += aoi_name(s.aoi);
    line += '\n';
    w.write_raw(line);
  }
  w.close();
}

void write_flight_log(const std::string& path, const FlightStream& stream) {
  CsvWriter w(path);
  std::string header;
  for (size_t i = 0; i < std::size(kFlightColumns); ++i) {
    if (i) header += ',';
    header += kFlightColumns[i];
  }
  header += '\n';
  w.write_raw(header);
  std::string line;
  for (const auto& s : stream) {
    const double nums[] = {s.t,   s.roll,           s.pitch,          s.yaw,        s.longitude,     s.latitude,
                           s.agl, s.asl,            s.tas,            s.gs,         s.vertical_speed, s.aoa,
                           s.rudder_input,          s.elevator_input, s.roll_input, s.ref_longitude, s.ref_latitude,
                           s.ref_height};
    line.clear();
    for (size_t i = 0; i < std::size(nums); ++i) {
      if (i) line += ',';
      line += fmt9(nums[i]);
    }
    line += '\n';
    w.write_raw(line);
  }
  w.close();
}

std::vector<ManifestEntry> parse_manifest(const std::string& path) {
  CsvTable table = read_csv_table(path);
  const std::vector<std::string> expected = {"participant_id", "label", "gaze_path", "flight_path"};
  std::array<size_t, 4> col{};
  for (size_t i = 0; i < expected.size(); ++i) {
    auto it = std::find(table.header.begin(), table.header.end(), expected[i]);
    if (it == table.header.end())
      throw DataError(strprintf("%s:1: missing required column '%s'", path.c_str(), expected[i].c_str()));
    col[i] = static_cast<size_t>(it - table.header.begin());
  }
  std::vector<ManifestEntry> out;
  std::set<std::string> seen;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    ManifestEntry e;
    e.id = row[col[0]];
    if (e.id.empty()) throw DataError(strprintf("%s:%zu: empty participant_id", path.c_str(), r + 2));
    if (!seen.insert(e.id).second)
      throw DataError(strprintf("%s:%zu: duplicate participant_id '%s'", path.c_str(), r + 2, e.id.c_str()));
    long label = parse_long_cell(row[col[1]], strprintf("%s:%zu: column 'label'", path.c_str(), r + 2));
    if (label != 0 && label != 1)
      throw DataError(strprintf("%s:%zu: label for '%s' must be 0 or 1, got %ld", path.c_str(), r + 2, e.id.c_str(),
                                label));
    e.label = static_cast<int>(label);
    e.gaze_path = row[col[2]];
    e.flight_path = row[col[3]];
    out.push_back(std::move(e));
  }
  return out;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
  CsvWriter w(path);
  w.write_raw("participant_id,label,gaze_path,flight_path\n");
  for (const auto& e : entries)
    w.write_raw(strprintf("%s,%d,%s,%s\n", e.id.c_str(), e.label, e.gaze_path.c_str(), e.flight_path.c_str()));
  w.close();
}

Cohort load_cohort(const std::string& manifest_path) {
  auto entries = parse_manifest(manifest_path);
  std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    if (fp.is_relative()) fp = base / fp;
    return fp.string();
  };
  Cohort cohort;
  cohort.reserve(entries.size());
  for (const auto& e : entries) {
    ParticipantRecord rec;
    rec.id = e.id;
    rec.label = e.label;
    try {
      rec.gaze = parse_gaze_log(resolve(e.gaze_path));
      rec.flight = parse_flight_log(resolve(e.flight_path));
    } catch (const DataError& err) {
      throw DataError(strprintf("participant '%s': %s", e.id.c_str(), err.what()));
    }
    cohort.push_back(std::move(rec));
  }
  return cohort;
}

}  // namespace skyselect
