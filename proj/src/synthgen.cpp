#include "slameval/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <random>
#include <string>

#include "json.hpp"
#include "slameval/errors.hpp"

namespace slameval {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

// Portable randomness: mt19937_64 output is pinned by the standard, and the
// mapping below avoids std::normal_distribution, whose sequence differs
// between standard libraries. Same seed, same bytes, everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; the pair partner is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return radius * std::cos(2.0 * M_PI * u2);
  }

  Vector3d normal3() {
    const double a = normal();
    const double b = normal();
    const double c = normal();
    return {a, b, c};
  }

  Vector3d unit_vector() {
    while (true) {
      const Vector3d v = normal3();
      const double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Quaterniond yaw_rotation(double yaw) {
  return Quaterniond(Eigen::AngleAxisd(yaw, Vector3d::UnitZ()));
}

struct PlanarState {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
};

}  // namespace

Trajectory generate_trajectory(PathKind kind, double duration, double rate,
                               std::uint64_t seed, double start_time) {
  if (!(duration > 0.0) || !std::isfinite(duration) || !(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidInputError("generate_trajectory: duration and rate must be positive");
  }
  const std::size_t count = static_cast<std::size_t>(std::llround(duration * rate));
  if (count < 2) {
    throw InvalidInputError("generate_trajectory: duration * rate must give at least 2 poses");
  }
  const double t_end = static_cast<double>(count - 1) / rate;

  Rng rng(seed);
  Trajectory trajectory;
  trajectory.frame_id = "world";
  trajectory.records.reserve(count);

  // Seed-dependent path parameters, drawn once up front.
  const double radius = rng.uniform(1.5, 3.0);
  const double direction = rng.uniform01() < 0.5 ? 1.0 : -1.0;
  const double speed = rng.uniform(0.5, 1.5);
  const double sway_amplitude = rng.uniform(0.2, 0.5);
  const double sway_frequency = rng.uniform(0.1, 0.3);
  const double oscillation_amplitude = rng.uniform(0.5, 1.5);
  const double oscillation_frequency = rng.uniform(0.3, 0.6);

  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / rate;
    PlanarState s;
    switch (kind) {
      case PathKind::kLoop: {
        // One full revolution over the sampled interval, so the last pose
        // returns to the start.
        const double angle = direction * 2.0 * M_PI * (t / t_end);
        s.x = radius * std::sin(angle);
        s.y = direction * radius * (1.0 - std::cos(angle));
        s.yaw = angle;
        break;
      }
      case PathKind::kCorridor: {
        const double omega = 2.0 * M_PI * sway_frequency;
        s.x = speed * t;
        s.y = sway_amplitude * std::sin(omega * t);
        s.yaw = std::atan2(sway_amplitude * omega * std::cos(omega * t), speed);
        break;
      }
      case PathKind::kUShape: {
        const double total = speed * t_end;
        const double leg = 0.4 * total;
        const double turn_radius = 0.2 * total / M_PI;
        const double arc = speed * t;
        if (arc < leg) {
          s.x = arc;
          s.y = 0.0;
          s.yaw = 0.0;
        } else if (arc < leg + M_PI * turn_radius) {
          const double phi = (arc - leg) / turn_radius;
          s.x = leg + turn_radius * std::sin(phi);
          s.y = turn_radius * (1.0 - std::cos(phi));
          s.yaw = phi;
        } else {
          const double back = arc - leg - M_PI * turn_radius;
          s.x = leg - back;
          s.y = 2.0 * turn_radius;
          s.yaw = M_PI;
        }
        break;
      }
      case PathKind::kBackAndForth: {
        const double omega = 2.0 * M_PI * oscillation_frequency;
        s.x = oscillation_amplitude * std::sin(omega * t);
        s.y = 0.0;
        // Tangent reverses at each turnaround.
        s.yaw = std::cos(omega * t) >= 0.0 ? 0.0 : M_PI;
        break;
      }
    }

    TimedPose record;
    record.timestamp = start_time + t;
    record.pose.translation = Vector3d(s.x, s.y, 0.0);
    record.pose.rotation = yaw_rotation(s.yaw);
    trajectory.records.push_back(record);
  }
  return trajectory;
}

bool PerturbationSpec::is_identity() const {
  return time_shift == 0.0 && frame_offset.scale == 1.0 &&
         frame_offset.translation.isZero(0.0) &&
         frame_offset.rotation.coeffs() == Quaterniond::Identity().coeffs() &&
         drift_translation_rate == 0.0 && drift_rotation_rate == 0.0 &&
         noise_translation_sigma == 0.0 && noise_rotation_sigma == 0.0 &&
         dropout_windows.empty() && !jump.has_value();
}

Trajectory perturb(const Trajectory& input, const PerturbationSpec& spec, std::uint64_t seed) {
  Trajectory out = input;
  if (out.records.empty()) return out;

  if (spec.time_shift != 0.0) {
    for (TimedPose& r : out.records) r.timestamp += spec.time_shift;
  }

  const bool offset_is_identity =
      spec.frame_offset.scale == 1.0 && spec.frame_offset.translation.isZero(0.0) &&
      spec.frame_offset.rotation.coeffs() == Quaterniond::Identity().coeffs();
  if (!offset_is_identity) {
    for (TimedPose& r : out.records) r.pose = spec.frame_offset.apply(r.pose);
  }

  if (spec.drift_translation_rate != 0.0 || spec.drift_rotation_rate != 0.0) {
    const double t_first = out.records.front().timestamp;
    for (TimedPose& r : out.records) {
      const double dt = r.timestamp - t_first;
      if (spec.drift_translation_rate != 0.0) {
        r.pose.translation.x() += spec.drift_translation_rate * dt;
      }
      if (spec.drift_rotation_rate != 0.0) {
        const double yaw = spec.drift_rotation_rate * kDegToRad * dt;
        r.pose.rotation = (yaw_rotation(yaw) * r.pose.rotation).normalized();
      }
    }
  }

  if (spec.noise_translation_sigma > 0.0 || spec.noise_rotation_sigma > 0.0) {
    Rng rng(seed);
    for (TimedPose& r : out.records) {
      if (spec.noise_translation_sigma > 0.0) {
        // Body-frame jitter, rotated into the world.
        const Vector3d body = spec.noise_translation_sigma * rng.normal3();
        r.pose.translation += r.pose.rotation * body;
      }
      if (spec.noise_rotation_sigma > 0.0) {
        const Vector3d axis = rng.unit_vector();
        const double angle = spec.noise_rotation_sigma * kDegToRad * rng.normal();
        r.pose.rotation =
            (r.pose.rotation * Quaterniond(Eigen::AngleAxisd(angle, axis))).normalized();
      }
    }
  }

  if (!spec.dropout_windows.empty()) {
    auto windows = spec.dropout_windows;
    std::sort(windows.begin(), windows.end());
    const double t_first = out.records.front().timestamp;
    const double t_last = out.records.back().timestamp;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (!(windows[i].first <= windows[i].second) || windows[i].first < t_first ||
          windows[i].second > t_last) {
        throw InvalidInputError("perturb: dropout window outside the trajectory span");
      }
      if (i > 0 && windows[i].first <= windows[i - 1].second) {
        throw InvalidInputError("perturb: dropout windows overlap");
      }
    }
    std::erase_if(out.records, [&windows](const TimedPose& r) {
      for (const auto& [a, b] : windows) {
        if (r.timestamp >= a && r.timestamp <= b) return true;
      }
      return false;
    });
  }

  if (spec.jump.has_value()) {
    const auto& [when, displacement] = *spec.jump;
    for (TimedPose& r : out.records) {
      if (r.timestamp >= when) r.pose.translation += displacement;
    }
  }

  return out;
}

PathKind parse_path_kind(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '_', '-');
  if (n == "loop") return PathKind::kLoop;
  if (n == "corridor") return PathKind::kCorridor;
  if (n == "u-shape") return PathKind::kUShape;
  if (n == "back-and-forth") return PathKind::kBackAndForth;
  throw InvalidInputError("unknown path kind: " + name);
}

std::string path_kind_name(PathKind kind) {
  switch (kind) {
    case PathKind::kLoop: return "loop";
    case PathKind::kCorridor: return "corridor";
    case PathKind::kUShape: return "u-shape";
    case PathKind::kBackAndForth: return "back-and-forth";
  }
  return "unknown";
}

PerturbationSpec parse_perturbation_spec(std::istream& in) {
  using nlohmann::json;
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInputError(std::string("perturbation spec: invalid JSON: ") + e.what());
  }

  PerturbationSpec spec;
  try {
    if (root.contains("time_shift")) spec.time_shift = root.at("time_shift").get<double>();
    if (root.contains("frame_offset")) {
      const json& f = root.at("frame_offset");
      if (f.contains("scale")) spec.frame_offset.scale = f.at("scale").get<double>();
      if (f.contains("rotation_wxyz")) {
        const json& q = f.at("rotation_wxyz");
        if (!q.is_array() || q.size() != 4) {
          throw InvalidInputError("perturbation spec: rotation_wxyz needs 4 numbers");
        }
        spec.frame_offset.rotation =
            Quaterniond(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(),
                        q[3].get<double>())
                .normalized();
      }
      if (f.contains("translation")) {
        const json& t = f.at("translation");
        if (!t.is_array() || t.size() != 3) {
          throw InvalidInputError("perturbation spec: translation needs 3 numbers");
        }
        spec.frame_offset.translation =
            Vector3d(t[0].get<double>(), t[1].get<double>(), t[2].get<double>());
      }
    }
    if (root.contains("drift_translation_rate")) {
      spec.drift_translation_rate = root.at("drift_translation_rate").get<double>();
    }
    if (root.contains("drift_rotation_rate")) {
      spec.drift_rotation_rate = root.at("drift_rotation_rate").get<double>();
    }
    if (root.contains("noise_translation_sigma")) {
      spec.noise_translation_sigma = root.at("noise_translation_sigma").get<double>();
    }
    if (root.contains("noise_rotation_sigma")) {
      spec.noise_rotation_sigma = root.at("noise_rotation_sigma").get<double>();
    }
    if (root.contains("dropout_windows")) {
      for (const json& w : root.at("dropout_windows")) {
        if (!w.is_array() || w.size() != 2) {
          throw InvalidInputError("perturbation spec: dropout window needs [start, end]");
        }
        spec.dropout_windows.emplace_back(w[0].get<double>(), w[1].get<double>());
      }
    }
    if (root.contains("jump")) {
      const json& j = root.at("jump");
      const json& d = j.at("displacement");
      if (!d.is_array() || d.size() != 3) {
        throw InvalidInputError("perturbation spec: jump displacement needs 3 numbers");
      }
      spec.jump = {{j.at("time").get<double>(),
                    Vector3d(d[0].get<double>(), d[1].get<double>(), d[2].get<double>())}};
    }
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("perturbation spec: ") + e.what());
  }
  if (spec.frame_offset.scale <= 0.0) {
    throw InvalidInputError("perturbation spec: frame offset scale must be positive");
  }
  return spec;
}

}  // namespace slameval
