#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slameval/lifelong.hpp"
#include "slameval/report.hpp"
#include "slameval/sync.hpp"
#include "slameval/synthgen.hpp"
#include "slameval/version.hpp"

namespace {

using namespace slameval;

struct EvaluateOptions {
  std::string manifest_path;
  std::vector<std::string> estimate_paths;
  std::string report_path;
  std::string csv_path;
  std::string svg_path;
  bool scale_free = false;
  double ate_threshold = 0.0;
  double aoe_threshold = 0.0;
  double delta = 0.0;
  double tau = 0.0;
  double rpe_interval = 0.0;
};

struct PairOptions : EvaluateOptions {
  std::size_t index_a = 0;
  std::size_t index_b = 1;
};

struct SyncOptions {
  std::string reference_path;
  std::string target_path;
  std::string report_path;
  double window = 0.5;
  double coarse_step = 0.005;
  double resolution = 1e-4;
};

struct SynthOptions {
  std::string kind = "loop";
  double duration = 60.0;
  double rate = 10.0;
  double start_time = 0.0;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string perturb_path;
  std::uint64_t perturb_seed = 1;
  std::string perturbed_out_path;
};

void add_threshold_flags(CLI::App* cmd, EvaluateOptions& opt) {
  cmd->add_option("--ate-threshold", opt.ate_threshold,
                  "override the ATE correctness threshold, meters (accepts inf)");
  cmd->add_option("--aoe-threshold", opt.aoe_threshold,
                  "override the AOE correctness threshold, degrees (accepts inf)");
  cmd->add_option("--delta", opt.delta, "override the estimate validity window, seconds");
  cmd->add_option("--tau", opt.tau, "override the re-localization decay constant, seconds");
  cmd->add_option("--rpe-interval", opt.rpe_interval,
                  "override the relative-error interval, seconds");
}

void apply_overrides(const CLI::App* cmd, const EvaluateOptions& opt, MetricConfig& config) {
  if (cmd->count("--ate-threshold") > 0) config.epsilon = opt.ate_threshold;
  if (cmd->count("--aoe-threshold") > 0) config.phi = opt.aoe_threshold;
  if (cmd->count("--delta") > 0) config.delta = opt.delta;
  if (cmd->count("--tau") > 0) config.tau = opt.tau;
  if (cmd->count("--rpe-interval") > 0) config.rpe_interval = opt.rpe_interval;
  config.validate();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write output file: " + path);
  }
  out << content;
}

std::string fmt3(double v) {
  char b[32];
  std::snprintf(b, sizeof(b), "%.3f", v);
  return b;
}

std::string fmt6(double v) {
  char b[48];
  std::snprintf(b, sizeof(b), "%.6f", v);
  return b;
}

std::string opt3(const std::optional<double>& v) { return v ? fmt3(*v) : "n/a"; }
std::string opt6(const std::optional<double>& v) { return v ? fmt6(*v) : "n/a"; }

void print_summary(const ReportDocument& report) {
  std::cout << "scene \"" << report.scene_name << "\" mode=" << report.mode
            << " sequences=" << report.sequences.size() << "\n";
  for (const SequenceReport& seq : report.sequences) {
    const SequenceEvaluation& e = seq.evaluation;
    std::cout << "  " << e.sequence_id << ": cr=" << fmt3(e.robustness.cr)
              << " cr_t=" << opt3(e.robustness.cr_t) << " cs_r=" << fmt3(e.robustness.cs_r)
              << " cr_inf=" << fmt3(e.cr_inf) << " ate_rmse=" << opt6(e.ate_rmse);
    if (e.accuracy.has_value()) {
      std::cout << " gated_ate_rmse=" << fmt6(e.accuracy->gated_ate_rmse)
                << " gated_rpe_rmse=" << opt6(e.accuracy->gated_rpe_rmse);
    }
    std::cout << " pairs=" << e.pair_count << " dropped=" << e.dropped;
    if (!e.aligned) std::cout << " [not evaluated: " << e.note << "]";
    std::cout << "\n";
  }
  std::cout << "scene: cr=" << fmt3(report.scene_cr) << " cr_inf=" << fmt3(report.scene_cr_inf)
            << " ate_rmse=" << opt6(report.scene_ate_rmse) << "\n";
}

void write_outputs(const EvaluateOptions& opt, const ReportDocument& report) {
  if (!opt.report_path.empty()) {
    write_text_file(opt.report_path, write_report_json(report));
    std::cout << "report written to " << opt.report_path << "\n";
  }
  if (!opt.csv_path.empty()) {
    write_text_file(opt.csv_path, write_pose_errors_csv(report));
    std::cout << "pose errors written to " << opt.csv_path << "\n";
  }
  if (!opt.svg_path.empty()) {
    write_text_file(opt.svg_path, render_timeline_svg(report));
    std::cout << "timeline written to " << opt.svg_path << "\n";
  }
}

struct SceneInputs {
  SceneManifest manifest;
  std::vector<Trajectory> estimates;
  std::vector<Trajectory> ground_truths;
};

SceneInputs load_scene(const EvaluateOptions& opt) {
  SceneInputs in;
  in.manifest = load_manifest(opt.manifest_path);
  if (opt.estimate_paths.size() != in.manifest.sequences.size()) {
    throw InvalidInputError("expected " + std::to_string(in.manifest.sequences.size()) +
                            " estimate files (one per manifest sequence), got " +
                            std::to_string(opt.estimate_paths.size()));
  }
  for (const SequenceSpec& spec : in.manifest.sequences) {
    in.ground_truths.push_back(load_trajectory(spec.ground_truth_path));
  }
  for (const std::string& path : opt.estimate_paths) {
    in.estimates.push_back(load_trajectory(path));
  }
  return in;
}

int run_scene(const CLI::App* cmd, const EvaluateOptions& opt, EvaluationMode mode) {
  SceneInputs in = load_scene(opt);
  apply_overrides(cmd, opt, in.manifest.metric_config);
  const SceneEvaluation scene =
      mode == EvaluationMode::kLifelong
          ? evaluate_lifelong(in.manifest, in.estimates, in.ground_truths, opt.scale_free)
          : evaluate_per_sequence(in.manifest, in.estimates, in.ground_truths, opt.scale_free);
  const ReportDocument report = build_report(scene, in.manifest.metric_config, opt.scale_free);
  print_summary(report);
  write_outputs(opt, report);
  return 0;
}

int run_pair(const CLI::App* cmd, const PairOptions& opt) {
  SceneManifest manifest = load_manifest(opt.manifest_path);
  if (opt.estimate_paths.size() != 2) {
    throw InvalidInputError("pair mode needs exactly 2 estimate files");
  }
  if (opt.index_a >= manifest.sequences.size() || opt.index_b >= manifest.sequences.size() ||
      opt.index_a == opt.index_b) {
    throw InvalidInputError("pair mode needs two distinct sequence indexes inside the manifest");
  }

  // Re-localization probe convention: tight position gate, orientation gate
  // off, 60 s decay. Flags still override.
  MetricConfig config = manifest.metric_config;
  config.epsilon = 0.3;
  config.phi = kInfinity;
  config.tau = 60.0;
  apply_overrides(cmd, opt, config);

  const SequenceSpec& spec_a = manifest.sequences[opt.index_a];
  const SequenceSpec& spec_b = manifest.sequences[opt.index_b];
  const Trajectory gt_a = load_trajectory(spec_a.ground_truth_path);
  const Trajectory gt_b = load_trajectory(spec_b.ground_truth_path);
  const Trajectory est_a = load_trajectory(opt.estimate_paths[0]);
  const Trajectory est_b = load_trajectory(opt.estimate_paths[1]);

  const PairEvaluation pair = evaluate_pair(est_a, est_b, gt_a, gt_b, spec_a, spec_b, config);

  ReportDocument report;
  report.tool = kToolName;
  report.version = kToolVersion;
  report.mode = "pair";
  report.scene_name = manifest.scene_name;
  report.config = config;
  report.pair_cs_r = pair.cs_r;
  SequenceReport seq;
  seq.evaluation = pair.second;
  seq.timeline = build_timeline(pair.second.timeline, pair.second.t_min, pair.second.t_max,
                                config.delta);
  if (!pair.second.timeline.empty()) {
    seq.events.push_back({pair.second.timeline.front().timestamp,
                          pair.second.timeline.front().correct, "relocalization"});
  }
  report.sequences.push_back(std::move(seq));
  report.scene_cr = pair.second.robustness.cr;
  report.scene_cr_inf = pair.second.cr_inf;
  report.scene_ate_rmse = pair.second.ate_rmse;

  std::cout << "pair " << spec_a.id << " -> " << spec_b.id << ": cs_r=" << fmt3(pair.cs_r)
            << "\n";
  write_outputs(opt, report);
  return 0;
}

int run_sync(const SyncOptions& opt) {
  const Trajectory reference = load_trajectory(opt.reference_path);
  const Trajectory target = load_trajectory(opt.target_path);
  const OffsetEstimate estimate =
      estimate_offset(reference, target, opt.window, opt.coarse_step, opt.resolution);

  std::cout << "offset=" << fmt6(estimate.offset) << " s ate_rmse=" << fmt6(
                   estimate.ate_rmse_at_optimum)
            << " m probed=" << estimate.probed << " excluded=" << estimate.excluded
            << (estimate.degenerate ? " [degenerate: objective flat, offset not observable]"
                                    : "")
            << "\n";

  if (!opt.report_path.empty()) {
    std::string json = "{\n";
    json += "  \"tool\": \"" + std::string(kToolName) + "\",\n";
    json += "  \"version\": \"" + std::string(kToolVersion) + "\",\n";
    json += "  \"mode\": \"sync\",\n";
    json += "  \"offset\": " + fmt6(estimate.offset) + ",\n";
    json += "  \"ate_rmse\": " + fmt6(estimate.ate_rmse_at_optimum) + ",\n";
    json += "  \"window\": [" + fmt6(estimate.window_min) + ", " + fmt6(estimate.window_max) +
            "],\n";
    json += "  \"resolution\": " + fmt6(estimate.resolution) + ",\n";
    json += "  \"degenerate\": " + std::string(estimate.degenerate ? "true" : "false") + ",\n";
    json += "  \"probed\": " + std::to_string(estimate.probed) + ",\n";
    json += "  \"excluded\": " + std::to_string(estimate.excluded) + "\n";
    json += "}\n";
    write_text_file(opt.report_path, json);
    std::cout << "report written to " << opt.report_path << "\n";
  }
  return 0;
}

int run_synth(const SynthOptions& opt) {
  const PathKind kind = parse_path_kind(opt.kind);
  const Trajectory trajectory =
      generate_trajectory(kind, opt.duration, opt.rate, opt.seed, opt.start_time);
  save_trajectory(trajectory, opt.out_path);
  std::cout << "wrote " << trajectory.size() << " poses (" << path_kind_name(kind) << ") to "
            << opt.out_path << "\n";

  if (!opt.perturb_path.empty()) {
    if (opt.perturbed_out_path.empty()) {
      throw InvalidInputError("--perturb needs --perturbed-out");
    }
    std::ifstream in(opt.perturb_path);
    if (!in) {
      throw IoError("cannot open perturbation spec: " + opt.perturb_path);
    }
    const PerturbationSpec spec = parse_perturbation_spec(in);
    const Trajectory perturbed = perturb(trajectory, spec, opt.perturb_seed);
    save_trajectory(perturbed, opt.perturbed_out_path);
    std::cout << "wrote " << perturbed.size() << " perturbed poses to "
              << opt.perturbed_out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pose-estimation evaluation for long-horizon SLAM"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  EvaluateOptions eval_opt;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "score each sequence independently against its ground truth");
  evaluate->add_option("--manifest", eval_opt.manifest_path, "scene manifest (JSON)")
      ->required();
  evaluate->add_option("estimates", eval_opt.estimate_paths,
                       "estimate trajectory files, one per manifest sequence, in order");
  evaluate->add_option("--report", eval_opt.report_path, "write the JSON report here");
  evaluate->add_option("--csv", eval_opt.csv_path, "write per-pose errors here");
  evaluate->add_option("--svg", eval_opt.svg_path, "write the timeline chart here");
  evaluate->add_flag("--scale-free", eval_opt.scale_free,
                     "fit a similarity (scale included) instead of a rigid alignment");
  add_threshold_flags(evaluate, eval_opt);

  EvaluateOptions life_opt;
  CLI::App* lifelong = app.add_subcommand(
      "lifelong", "fit the frame on sequence 1 and propagate it to every sequence");
  lifelong->add_option("--manifest", life_opt.manifest_path, "scene manifest (JSON)")
      ->required();
  lifelong->add_option("estimates", life_opt.estimate_paths,
                       "estimate trajectory files, one per manifest sequence, in order");
  lifelong->add_option("--report", life_opt.report_path, "write the JSON report here");
  lifelong->add_option("--csv", life_opt.csv_path, "write per-pose errors here");
  lifelong->add_option("--svg", life_opt.svg_path, "write the timeline chart here");
  lifelong->add_flag("--scale-free", life_opt.scale_free,
                     "fit scale on sequence 1 and propagate it (never re-fitted)");
  add_threshold_flags(lifelong, life_opt);

  PairOptions pair_opt;
  CLI::App* pair = app.add_subcommand(
      "pair", "re-localization score of a second sequence against a map built on the first");
  pair->add_option("--manifest", pair_opt.manifest_path, "scene manifest (JSON)")->required();
  pair->add_option("--index-a", pair_opt.index_a, "manifest index of the map sequence");
  pair->add_option("--index-b", pair_opt.index_b, "manifest index of the probe sequence");
  pair->add_option("estimates", pair_opt.estimate_paths,
                   "estimate files for the two sequences, in order");
  pair->add_option("--report", pair_opt.report_path, "write the JSON report here");
  add_threshold_flags(pair, pair_opt);

  SyncOptions sync_opt;
  CLI::App* sync = app.add_subcommand(
      "sync", "estimate the time offset between two trajectories of the same rig");
  sync->add_option("reference", sync_opt.reference_path, "reference trajectory")->required();
  sync->add_option("target", sync_opt.target_path, "target trajectory")->required();
  sync->add_option("--window", sync_opt.window, "search half-window, seconds (default 0.5)");
  sync->add_option("--coarse-step", sync_opt.coarse_step,
                   "grid step before refinement, seconds (default 0.005)");
  sync->add_option("--resolution", sync_opt.resolution,
                   "refinement stop width, seconds (default 0.0001)");
  sync->add_option("--report", sync_opt.report_path, "write the JSON result here");

  SynthOptions synth_opt;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic trajectory");
  synth->add_option("--kind", synth_opt.kind,
                    "path kind: loop, corridor, u-shape, back-and-forth");
  synth->add_option("--duration", synth_opt.duration, "seconds of data (default 60)");
  synth->add_option("--rate", synth_opt.rate, "poses per second (default 10)");
  synth->add_option("--start-time", synth_opt.start_time, "timestamp of the first pose");
  synth->add_option("--seed", synth_opt.seed, "generator seed");
  synth->add_option("--out", synth_opt.out_path, "output trajectory file")->required();
  synth->add_option("--perturb", synth_opt.perturb_path, "perturbation spec (JSON)");
  synth->add_option("--perturb-seed", synth_opt.perturb_seed, "noise seed for --perturb");
  synth->add_option("--perturbed-out", synth_opt.perturbed_out_path,
                    "output file for the perturbed copy");

  CLI11_PARSE(app, argc, argv);

  try {
    if (evaluate->parsed()) return run_scene(evaluate, eval_opt, EvaluationMode::kPerSequence);
    if (lifelong->parsed()) return run_scene(lifelong, life_opt, EvaluationMode::kLifelong);
    if (pair->parsed()) return run_pair(pair, pair_opt);
    if (sync->parsed()) return run_sync(sync_opt);
    if (synth->parsed()) return run_synth(synth_opt);
  } catch (const slameval::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
