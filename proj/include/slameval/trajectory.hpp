#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "slameval/geometry.hpp"

namespace slameval {

// Ordered pose sequence. Records are strictly increasing in time and every
// rotation is unit-norm; both invariants are enforced on ingest.
struct Trajectory {
  std::vector<TimedPose> records;
  std::string frame_id;
  std::string source_label;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
  double start_time() const { return records.front().timestamp; }
  double end_time() const { return records.back().timestamp; }
};

// Parses trajectory text: one record per line as
//   timestamp tx ty tz qx qy qz qw
// (seconds, meters, quaternion scalar-last). '#' starts a comment line and
// blank lines are skipped. Quaternions are renormalized on ingest.
// Throws ParseError / OrderingError / InvalidRecordError with the offending
// line number in the message.
Trajectory parse_trajectory(std::istream& in, std::string source_label = "");

// parse_trajectory over a file; IoError when the file cannot be opened.
Trajectory load_trajectory(const std::filesystem::path& path);

// Writes records in the same line format, fixed 9-decimal fields. Reparsing
// the output reproduces every pose within 1e-9; timestamps and positions
// reserialize byte-identically (rotations pass through renormalization).
void serialize_trajectory(const Trajectory& trajectory, std::ostream& out);

void save_trajectory(const Trajectory& trajectory, const std::filesystem::path& path);

}  // namespace slameval
