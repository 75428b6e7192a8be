#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "slameval/trajectory.hpp"

namespace slameval {

enum class PathKind {
  kLoop,          // closed circle, one revolution
  kCorridor,      // forward motion with gentle lateral sway
  kUShape,        // out, half-circle turn, back
  kBackAndForth,  // oscillation along a single axis
};

// Smooth planar trajectory with the heading tangent to the path, sampled at
// `rate` Hz for `duration` seconds (duration * rate records, the first at
// start_time). The seed perturbs path parameters (size, speed, phase) so
// different seeds give different geometry; the same seed always reproduces
// the same records bit for bit.
Trajectory generate_trajectory(PathKind kind, double duration, double rate,
                               std::uint64_t seed, double start_time = 0.0);

// Degradations applied in a fixed order: time shift, frame offset, drift,
// noise, dropouts, jump. Zero-valued stages are skipped, so the all-default
// spec returns the input unchanged, bit for bit.
struct PerturbationSpec {
  double time_shift = 0.0;              // seconds added to every timestamp
  SimilarityTransform frame_offset;     // applied to every pose (map-frame move)
  double drift_translation_rate = 0.0;  // m/s, accumulated along world +x
  double drift_rotation_rate = 0.0;     // deg/s, accumulated yaw about world +z
  double noise_translation_sigma = 0.0; // meters, i.i.d. in the body frame
  double noise_rotation_sigma = 0.0;    // degrees, random axis
  std::vector<std::pair<double, double>> dropout_windows;  // [start, end] removed
  std::optional<std::pair<double, Vector3d>> jump;  // at time, position offset

  bool is_identity() const;
};

// Applies the perturbation chain. The noise stage draws from a fixed,
// portable generator
// (mt19937_64 bits mapped to doubles, Box-Muller for normals) so outputs are
// identical across platforms for a given seed.
// Throws InvalidInputError on overlapping or out-of-span dropout windows.
Trajectory perturb(const Trajectory& input, const PerturbationSpec& spec, std::uint64_t seed);

PathKind parse_path_kind(const std::string& name);  // "loop", "corridor", ...
std::string path_kind_name(PathKind kind);

// Reads a spec from JSON (all fields optional; see README for the schema).
// Throws InvalidInputError on malformed input.
PerturbationSpec parse_perturbation_spec(std::istream& in);

}  // namespace slameval
