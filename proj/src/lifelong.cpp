#include "slameval/lifelong.hpp"

#include <cmath>

namespace slameval {

namespace {

struct ClippedPairs {
  std::vector<AssociatedPair> pairs;
  std::size_t dropped = 0;
};

// The manifest span is authoritative: pairs outside it do not enter any
// denominator or alignment.
ClippedPairs clip_to_span(std::vector<AssociatedPair>&& pairs, const SequenceSpec& spec) {
  ClippedPairs out;
  out.pairs.reserve(pairs.size());
  for (AssociatedPair& p : pairs) {
    if (p.timestamp >= spec.t_min && p.timestamp <= spec.t_max) {
      out.pairs.push_back(std::move(p));
    } else {
      ++out.dropped;
    }
  }
  return out;
}

SequenceEvaluation zero_scored(const SequenceSpec& spec, std::size_t dropped,
                               std::string note) {
  SequenceEvaluation eval;
  eval.sequence_id = spec.id;
  eval.t_min = spec.t_min;
  eval.t_max = spec.t_max;
  eval.dropped = dropped;
  eval.aligned = false;
  eval.note = std::move(note);
  eval.robustness.t_min = spec.t_min;
  eval.robustness.t_max = spec.t_max;
  return eval;
}

double residual_over(const SimilarityTransform& transform,
                     std::span<const AssociatedPair> pairs) {
  double sum = 0.0;
  for (const AssociatedPair& p : pairs) {
    sum += (transform.apply(p.estimate.translation) - p.ground_truth.translation).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(pairs.size()));
}

SequenceEvaluation score_sequence(const SequenceSpec& spec, const MetricConfig& config,
                                  std::vector<AssociatedPair> pairs, std::size_t dropped,
                                  const Alignment& alignment) {
  SequenceEvaluation eval;
  eval.sequence_id = spec.id;
  eval.t_min = spec.t_min;
  eval.t_max = spec.t_max;
  eval.pair_count = pairs.size();
  eval.dropped = dropped;
  eval.aligned = true;
  eval.alignment = alignment;

  eval.timeline = pose_errors(pairs, alignment, config);
  eval.robustness = robustness(eval.timeline, spec.t_min, spec.t_max, config);
  eval.ate_rmse = ate_rmse(eval.timeline);

  // Coverage-only correct rate: same windows, thresholds disabled.
  std::vector<PoseError> all_correct = eval.timeline;
  for (PoseError& e : all_correct) e.correct = true;
  eval.cr_inf = correct_rate(all_correct, spec.t_min, spec.t_max, config.delta).cr;

  const std::vector<AssociatedPair> aligned_pairs =
      apply_alignment(alignment.transform, pairs);
  eval.accuracy = gated_accuracy(eval.timeline, aligned_pairs, config);
  return eval;
}

void aggregate_scene(SceneEvaluation& scene) {
  std::vector<double> crs, cr_infs, spans, rmses;
  std::vector<std::size_t> counts;
  for (const SequenceEvaluation& s : scene.sequences) {
    crs.push_back(s.robustness.cr);
    cr_infs.push_back(s.cr_inf);
    spans.push_back(s.t_max - s.t_min);
    if (scene.mode == EvaluationMode::kLifelong) {
      if (s.accuracy.has_value()) {
        rmses.push_back(s.accuracy->gated_ate_rmse);
        counts.push_back(s.accuracy->sample_count);
      }
    } else if (s.ate_rmse.has_value()) {
      rmses.push_back(*s.ate_rmse);
      counts.push_back(s.pair_count);
    }
  }
  scene.scene_cr = span_weighted_mean(crs, spans);
  scene.scene_cr_inf = span_weighted_mean(cr_infs, spans);
  scene.scene_ate_rmse = pooled_rmse(rmses, counts);
}

void check_inputs(const SceneManifest& manifest, const std::vector<Trajectory>& estimates,
                  const std::vector<Trajectory>& ground_truths) {
  if (estimates.size() != manifest.sequences.size() ||
      ground_truths.size() != manifest.sequences.size()) {
    throw InvalidInputError("scene evaluation: need one estimate and one ground truth per "
                            "manifest sequence");
  }
}

}  // namespace

SequenceEvaluation evaluate_sequence(const Trajectory& estimate, const Trajectory& ground_truth,
                                     const SequenceSpec& spec, const MetricConfig& config,
                                     bool scale_free) {
  config.validate();
  Association assoc = associate(estimate, ground_truth);
  ClippedPairs clipped = clip_to_span(std::move(assoc.pairs), spec);
  if (clipped.pairs.empty()) {
    throw NoOverlapError("evaluate_sequence: no estimate inside the evaluation span of \"" +
                         spec.id + "\"");
  }
  const Alignment alignment =
      scale_free ? align_umeyama(clipped.pairs) : align_horn(clipped.pairs);
  return score_sequence(spec, config, std::move(clipped.pairs),
                        assoc.dropped + clipped.dropped, alignment);
}

SceneEvaluation evaluate_per_sequence(const SceneManifest& manifest,
                                      const std::vector<Trajectory>& estimates,
                                      const std::vector<Trajectory>& ground_truths,
                                      bool scale_free) {
  check_inputs(manifest, estimates, ground_truths);
  SceneEvaluation scene;
  scene.scene_name = manifest.scene_name;
  scene.mode = EvaluationMode::kPerSequence;
  for (std::size_t i = 0; i < manifest.sequences.size(); ++i) {
    const SequenceSpec& spec = manifest.sequences[i];
    try {
      scene.sequences.push_back(evaluate_sequence(estimates[i], ground_truths[i], spec,
                                                  manifest.metric_config, scale_free));
    } catch (const NoOverlapError& e) {
      scene.sequences.push_back(zero_scored(spec, estimates[i].size(), e.what()));
    } catch (const UnderdeterminedError& e) {
      scene.sequences.push_back(zero_scored(spec, 0, e.what()));
    } catch (const DegenerateScaleError& e) {
      scene.sequences.push_back(zero_scored(spec, 0, e.what()));
    }
  }
  aggregate_scene(scene);
  return scene;
}

SceneEvaluation evaluate_lifelong(const SceneManifest& manifest,
                                  const std::vector<Trajectory>& estimates,
                                  const std::vector<Trajectory>& ground_truths,
                                  bool scale_free) {
  check_inputs(manifest, estimates, ground_truths);
  const MetricConfig& config = manifest.metric_config;
  config.validate();

  SceneEvaluation scene;
  scene.scene_name = manifest.scene_name;
  scene.mode = EvaluationMode::kLifelong;

  // The propagation transform comes from sequence 1 alone. Without it the
  // remaining sequences cannot be judged, so failure here fails the scene.
  SimilarityTransform propagation;
  {
    const SequenceSpec& spec = manifest.sequences.front();
    Association assoc = associate(estimates.front(), ground_truths.front());
    ClippedPairs clipped = clip_to_span(std::move(assoc.pairs), spec);
    if (clipped.pairs.empty()) {
      throw NoOverlapError("lifelong: first sequence \"" + spec.id +
                           "\" has no estimate inside its span; scene cannot be aligned");
    }
    const Alignment first =
        scale_free ? align_umeyama(clipped.pairs) : align_horn(clipped.pairs);
    propagation = first.transform;
    scene.propagation = propagation;
  }

  for (std::size_t i = 0; i < manifest.sequences.size(); ++i) {
    const SequenceSpec& spec = manifest.sequences[i];
    std::size_t dropped = 0;
    std::vector<AssociatedPair> pairs;
    try {
      Association assoc = associate(estimates[i], ground_truths[i]);
      ClippedPairs clipped = clip_to_span(std::move(assoc.pairs), spec);
      pairs = std::move(clipped.pairs);
      dropped = assoc.dropped + clipped.dropped;
    } catch (const NoOverlapError&) {
      scene.sequences.push_back(
          zero_scored(spec, estimates[i].size(), "no overlap with ground truth"));
      continue;
    }
    if (pairs.empty()) {
      scene.sequences.push_back(
          zero_scored(spec, dropped, "no estimate inside the evaluation span"));
      continue;
    }
    Alignment fixed;
    fixed.transform = propagation;
    fixed.pair_count = pairs.size();
    fixed.residual_rmse = residual_over(propagation, pairs);
    scene.sequences.push_back(score_sequence(spec, config, std::move(pairs), dropped, fixed));
  }
  aggregate_scene(scene);
  return scene;
}

PairEvaluation evaluate_pair(const Trajectory& estimate_a, const Trajectory& estimate_b,
                             const Trajectory& ground_truth_a, const Trajectory& ground_truth_b,
                             const SequenceSpec& spec_a, const SequenceSpec& spec_b,
                             const MetricConfig& config) {
  config.validate();

  Association assoc_a = associate(estimate_a, ground_truth_a);
  ClippedPairs clipped_a = clip_to_span(std::move(assoc_a.pairs), spec_a);
  if (clipped_a.pairs.empty()) {
    throw NoOverlapError("pair: first sequence \"" + spec_a.id +
                         "\" has no estimate inside its span; cannot align");
  }
  const Alignment first = align_horn(clipped_a.pairs);

  PairEvaluation out;
  std::size_t dropped = 0;
  std::vector<AssociatedPair> pairs;
  try {
    Association assoc_b = associate(estimate_b, ground_truth_b);
    ClippedPairs clipped_b = clip_to_span(std::move(assoc_b.pairs), spec_b);
    pairs = std::move(clipped_b.pairs);
    dropped = assoc_b.dropped + clipped_b.dropped;
  } catch (const NoOverlapError&) {
    out.second = zero_scored(spec_b, estimate_b.size(), "no overlap with ground truth");
    return out;
  }
  if (pairs.empty()) {
    out.second = zero_scored(spec_b, dropped, "no estimate inside the evaluation span");
    return out;
  }
  Alignment fixed;
  fixed.transform = first.transform;
  fixed.pair_count = pairs.size();
  fixed.residual_rmse = residual_over(first.transform, pairs);
  out.second = score_sequence(spec_b, config, std::move(pairs), dropped, fixed);
  out.cs_r = out.second.robustness.cs_r;
  return out;
}

double span_weighted_mean(std::span<const double> values, std::span<const double> weights) {
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] > 0.0) {
      weighted += values[i] * weights[i];
      total += weights[i];
    }
  }
  return total > 0.0 ? weighted / total : 0.0;
}

std::optional<double> pooled_rmse(std::span<const double> rmses,
                                  std::span<const std::size_t> counts) {
  double sum = 0.0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < rmses.size(); ++i) {
    sum += rmses[i] * rmses[i] * static_cast<double>(counts[i]);
    total += counts[i];
  }
  if (total == 0) return std::nullopt;
  return std::sqrt(sum / static_cast<double>(total));
}

}  // namespace slameval
