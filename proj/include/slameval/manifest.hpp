#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "slameval/config.hpp"

namespace slameval {

// One sequence of a scene: where its ground truth lives and the time span
// the data covers. The span is authoritative for evaluation denominators;
// estimate files never widen it.
struct SequenceSpec {
  std::string id;
  std::filesystem::path ground_truth_path;
  double t_min = 0.0;
  double t_max = 0.0;

  double span() const { return t_max - t_min; }
};

// Scene description: named sequences in playback order plus the metric
// configuration. See README for the JSON schema.
struct SceneManifest {
  std::string scene_name;
  std::vector<SequenceSpec> sequences;
  MetricConfig metric_config;
};

// Parses and validates manifest JSON. Rejects empty sequence lists, missing
// ground-truth paths, inverted spans, and spans that overlap or run out of
// order. Throws ManifestError.
SceneManifest parse_manifest(std::istream& in);

// parse_manifest over a file; relative ground-truth paths are resolved
// against the manifest's directory.
SceneManifest load_manifest(const std::filesystem::path& path);

}  // namespace slameval
