#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slameval/manifest.hpp"
#include "slameval/metrics.hpp"

namespace slameval {

// Everything measured for one sequence. `aligned` is false when the sequence
// produced no usable pairs; its scores are then zero by definition rather
// than missing, and `note` says why.
struct SequenceEvaluation {
  std::string sequence_id;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t pair_count = 0;
  std::size_t dropped = 0;  // estimates outside ground-truth coverage or span
  bool aligned = false;
  std::string note;
  Alignment alignment;
  std::vector<PoseError> timeline;
  RobustnessResult robustness;
  double cr_inf = 0.0;  // correct rate with both thresholds disabled: coverage
  std::optional<double> ate_rmse;          // over all matched poses
  std::optional<AccuracyResult> accuracy;  // over correct poses only
};

enum class EvaluationMode {
  kPerSequence,  // each sequence aligned on its own
  kLifelong,     // sequence 1 alignment propagated to every sequence
};

struct SceneEvaluation {
  std::string scene_name;
  EvaluationMode mode = EvaluationMode::kPerSequence;
  std::vector<SequenceEvaluation> sequences;
  double scene_cr = 0.0;      // span-weighted mean of per-sequence cr
  double scene_cr_inf = 0.0;  // span-weighted mean of per-sequence coverage
  // Pooled RMSE weighted by contributing pose counts; all matched poses in
  // per-sequence mode, correct poses in lifelong mode. Absent when nothing
  // contributed.
  std::optional<double> scene_ate_rmse;
  std::optional<SimilarityTransform> propagation;  // lifelong only
};

// Associate, align (Umeyama when scale_free, Horn otherwise), and score one
// sequence against its ground truth over the manifest span [t_min, t_max].
// Pairs outside the span are dropped before scoring. Association and
// alignment errors propagate.
SequenceEvaluation evaluate_sequence(const Trajectory& estimate, const Trajectory& ground_truth,
                                     const SequenceSpec& spec, const MetricConfig& config,
                                     bool scale_free = false);

// Per-sequence protocol: every sequence is aligned independently. A sequence
// that cannot be associated or aligned is scored zero, not propagated as an
// error: a SLAM run that never localizes is an outcome, not an input fault.
SceneEvaluation evaluate_per_sequence(const SceneManifest& manifest,
                                      const std::vector<Trajectory>& estimates,
                                      const std::vector<Trajectory>& ground_truths,
                                      bool scale_free = false);

// Lifelong protocol: the map-to-world transform is fitted on sequence 1 only
// and applied to every sequence, so map reuse is what gets scored. With
// scale_free the sequence-1 fit includes scale; it is never re-fitted later.
// Later sequences with no usable pairs score cr = 0 and cs_r = 0. A first
// sequence that cannot be aligned is a scene-level failure (NoOverlapError /
// UnderdeterminedError propagates).
SceneEvaluation evaluate_lifelong(const SceneManifest& manifest,
                                  const std::vector<Trajectory>& estimates,
                                  const std::vector<Trajectory>& ground_truths,
                                  bool scale_free = false);

struct PairEvaluation {
  double cs_r = 0.0;
  SequenceEvaluation second;
};

// Re-localization probe across a sequence pair: align on the first sequence,
// propagate to the second, return the second's re-localization score. The
// caller chooses thresholds; the conventional configuration is epsilon =
// 0.3 m, phi unbounded, tau = 60 s.
PairEvaluation evaluate_pair(const Trajectory& estimate_a, const Trajectory& estimate_b,
                             const Trajectory& ground_truth_a, const Trajectory& ground_truth_b,
                             const SequenceSpec& spec_a, const SequenceSpec& spec_b,
                             const MetricConfig& config);

// Span-weighted mean; ignores entries with non-positive weight.
double span_weighted_mean(std::span<const double> values, std::span<const double> weights);

// RMSE over the concatenation of groups given each group's RMSE and size.
std::optional<double> pooled_rmse(std::span<const double> rmses,
                                  std::span<const std::size_t> counts);

}  // namespace slameval
