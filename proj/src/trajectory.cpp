#include "slameval/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "slameval/errors.hpp"

namespace slameval {

namespace {

// Norm below this cannot be meaningfully renormalized.
constexpr double kMinQuaternionNorm = 1e-9;

std::string where(const std::string& label, std::size_t line) {
  std::ostringstream out;
  if (!label.empty()) out << label << ":";
  out << "line " << line;
  return out.str();
}

}  // namespace

Trajectory parse_trajectory(std::istream& in, std::string source_label) {
  Trajectory trajectory;
  trajectory.source_label = std::move(source_label);

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    double v[8];
    std::istringstream fields(line);
    int count = 0;
    double value;
    while (fields >> value) {
      if (count < 8) v[count] = value;
      ++count;
    }
    if (!fields.eof()) {
      throw ParseError(where(trajectory.source_label, line_number) + ": unreadable field");
    }
    if (count != 8) {
      throw ParseError(where(trajectory.source_label, line_number) + ": expected 8 fields, got " +
                       std::to_string(count));
    }
    for (int i = 0; i < 8; ++i) {
      if (!std::isfinite(v[i])) {
        throw InvalidRecordError(where(trajectory.source_label, line_number) +
                                 ": non-finite value");
      }
    }

    TimedPose record;
    record.timestamp = v[0];
    record.pose.translation = Vector3d(v[1], v[2], v[3]);
    Quaterniond q(v[7], v[4], v[5], v[6]);  // file order is qx qy qz qw
    const double norm = q.norm();
    if (norm < kMinQuaternionNorm) {
      throw InvalidRecordError(where(trajectory.source_label, line_number) +
                               ": zero-norm quaternion");
    }
    q.coeffs() /= norm;
    record.pose.rotation = q;

    if (!trajectory.records.empty() && record.timestamp <= trajectory.records.back().timestamp) {
      throw OrderingError(where(trajectory.source_label, line_number) +
                          ": timestamp not strictly increasing");
    }
    trajectory.records.push_back(record);
  }
  return trajectory;
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open trajectory file: " + path.string());
  }
  return parse_trajectory(in, path.filename().string());
}

void serialize_trajectory(const Trajectory& trajectory, std::ostream& out) {
  out << "# timestamp tx ty tz qx qy qz qw\n";
  char buffer[256];
  for (const TimedPose& r : trajectory.records) {
    const Vector3d& t = r.pose.translation;
    const Quaterniond& q = r.pose.rotation;
    std::snprintf(buffer, sizeof(buffer),
                  "%.9f %.9f %.9f %.9f %.9f %.9f %.9f %.9f\n",
                  r.timestamp, t.x(), t.y(), t.z(), q.x(), q.y(), q.z(), q.w());
    out << buffer;
  }
}

void save_trajectory(const Trajectory& trajectory, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write trajectory file: " + path.string());
  }
  serialize_trajectory(trajectory, out);
}

}  // namespace slameval
