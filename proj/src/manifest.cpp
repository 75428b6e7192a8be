#include "slameval/manifest.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include "json.hpp"

namespace slameval {

namespace {

using nlohmann::json;

// Threshold fields accept a number or the string "inf" so manifests can
// disable a gate.
double threshold_value(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfinity;
    throw ManifestError("manifest: " + key + " must be a number or \"inf\"");
  }
  if (!v.is_number()) {
    throw ManifestError("manifest: " + key + " must be a number or \"inf\"");
  }
  return v.get<double>();
}

double number_value(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ManifestError("manifest: " + key + " must be a number");
  return v.get<double>();
}

}  // namespace

SceneManifest parse_manifest(std::istream& in) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ManifestError(std::string("manifest: invalid JSON: ") + e.what());
  }

  SceneManifest manifest;
  try {
    if (!root.contains("scene") || !root.at("scene").is_string()) {
      throw ManifestError("manifest: missing string field \"scene\"");
    }
    manifest.scene_name = root.at("scene").get<std::string>();

    if (root.contains("metrics")) {
      const json& m = root.at("metrics");
      if (!m.is_object()) throw ManifestError("manifest: \"metrics\" must be an object");
      if (m.contains("epsilon")) manifest.metric_config.epsilon = threshold_value(m, "epsilon");
      if (m.contains("phi")) manifest.metric_config.phi = threshold_value(m, "phi");
      if (m.contains("delta")) manifest.metric_config.delta = number_value(m, "delta");
      if (m.contains("tau")) manifest.metric_config.tau = number_value(m, "tau");
      if (m.contains("rpe_interval")) {
        manifest.metric_config.rpe_interval = number_value(m, "rpe_interval");
      }
    }

    if (!root.contains("sequences") || !root.at("sequences").is_array()) {
      throw ManifestError("manifest: missing array field \"sequences\"");
    }
    for (const json& s : root.at("sequences")) {
      SequenceSpec spec;
      if (!s.contains("id") || !s.at("id").is_string()) {
        throw ManifestError("manifest: sequence entry missing string field \"id\"");
      }
      spec.id = s.at("id").get<std::string>();
      if (!s.contains("ground_truth") || !s.at("ground_truth").is_string() ||
          s.at("ground_truth").get<std::string>().empty()) {
        throw ManifestError("manifest: sequence \"" + spec.id +
                            "\" missing ground-truth path");
      }
      spec.ground_truth_path = s.at("ground_truth").get<std::string>();
      if (!s.contains("span") || !s.at("span").is_array() || s.at("span").size() != 2 ||
          !s.at("span")[0].is_number() || !s.at("span")[1].is_number()) {
        throw ManifestError("manifest: sequence \"" + spec.id +
                            "\" needs span [t_min, t_max]");
      }
      spec.t_min = s.at("span")[0].get<double>();
      spec.t_max = s.at("span")[1].get<double>();
      manifest.sequences.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw ManifestError(std::string("manifest: ") + e.what());
  }

  if (manifest.sequences.empty()) {
    throw ManifestError("manifest: sequence list is empty");
  }
  for (const SequenceSpec& s : manifest.sequences) {
    if (!std::isfinite(s.t_min) || !std::isfinite(s.t_max) || s.t_min >= s.t_max) {
      throw ManifestError("manifest: sequence \"" + s.id + "\" has invalid span");
    }
  }
  // Sequences are recorded one after another; spans must not overlap and
  // must appear in playback order.
  for (std::size_t i = 1; i < manifest.sequences.size(); ++i) {
    if (manifest.sequences[i].t_min < manifest.sequences[i - 1].t_max) {
      throw ManifestError("manifest: spans of sequences \"" + manifest.sequences[i - 1].id +
                          "\" and \"" + manifest.sequences[i].id +
                          "\" overlap or run out of order");
    }
  }

  manifest.metric_config.validate();
  return manifest;
}

SceneManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open manifest: " + path.string());
  }
  SceneManifest manifest = parse_manifest(in);
  const std::filesystem::path base = path.parent_path();
  for (SequenceSpec& s : manifest.sequences) {
    if (s.ground_truth_path.is_relative()) {
      s.ground_truth_path = base / s.ground_truth_path;
    }
  }
  return manifest;
}

}  // namespace slameval
