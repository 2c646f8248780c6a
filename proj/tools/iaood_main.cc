// Copyright 2026 The iaood Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// iaood: generate synthetic OOD datasets, score them with the softmax
// baselines, and evaluate pixel-wise or instance-wise.
//
// Exit codes: 0 success, 1 I/O or validation failure, 2 degenerate
// population or a not-computable metric in the report.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iaood/dataset.h"
#include "iaood/error.h"
#include "iaood/pipeline.h"
#include "iaood/report.h"

namespace {

namespace fs = std::filesystem;
using namespace iaood;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitDegenerate = 2;

std::set<std::uint8_t> ToClassSet(const std::vector<int>& ids, const char* what) {
  std::set<std::uint8_t> out;
  for (int id : ids) {
    if (id < 0 || id > 255) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(what) + " ids must be in [0, 255]");
    }
    out.insert(static_cast<std::uint8_t>(id));
  }
  return out;
}

struct EvalFlags {
  std::string data;
  std::string method = "obsnet-file";
  std::string detector;
  std::vector<int> ood_classes;
  std::vector<int> stuff_classes;
  int connectivity = 0;
  std::vector<std::size_t> deltas = {0, 16, 32, 48};
  double iou_threshold = kDefaultIouThreshold;
  std::string pixel_filter = "zero";
  std::string map_population = "with-missed";
  bool map_detected_only = false;
  std::size_t detection_min_delta = 0;
  std::size_t bins = 20;
  std::string out = ".";
  bool overlays = false;
};

void AddCommonEvalFlags(CLI::App* cmd, EvalFlags& f, bool with_filter,
                        bool with_matching) {
  cmd->add_option("--data", f.data, "Dataset root (holds manifest.json)")
      ->required();
  cmd->add_option("--method", f.method, "obsnet-file | mcp | mcdropout")
      ->check(CLI::IsMember({"obsnet-file", "mcp", "mcdropout"}));
  cmd->add_option("--ood-classes", f.ood_classes,
                  "OOD class ids (default: from manifest)")
      ->delimiter(',');
  cmd->add_option("--stuff-classes", f.stuff_classes,
                  "Class ids the GT detector maps to background (default: "
                  "from manifest)")
      ->delimiter(',');
  cmd->add_option("--connectivity", f.connectivity,
                  "GT detector connectivity, 4 or 8 (default: from manifest)")
      ->check(CLI::IsMember({4, 8}));
  cmd->add_option("--out", f.out, "Output directory for reports")
      ->capture_default_str();
  if (with_filter) {
    cmd->add_option("--pixel-filter", f.pixel_filter,
                    "zero: score 0 off-detection; drop: leave those pixels out")
        ->check(CLI::IsMember({"zero", "drop"}))
        ->capture_default_str();
  }
  if (with_matching) {
    cmd->add_option("--deltas", f.deltas, "Size thresholds, ascending")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--iou-threshold", f.iou_threshold,
                    "Match when IoU is strictly greater")
        ->capture_default_str();
    cmd->add_option("--map-population", f.map_population,
                    "with-missed | detected-only")
        ->check(CLI::IsMember({"with-missed", "detected-only"}))
        ->capture_default_str();
    cmd->add_flag("--map-detected-only", f.map_detected_only,
                  "Shorthand for --map-population detected-only");
    cmd->add_option("--min-detection-delta", f.detection_min_delta,
                    "Drop detections below delta^2 pixels before matching")
        ->capture_default_str();
    cmd->add_option("--bins", f.bins, "Histogram bins")->capture_default_str();
  }
}

RunConfig ToRunConfig(const EvalFlags& f) {
  RunConfig c;
  c.dataset_root = f.data;
  c.method = ParseMethod(f.method);
  c.detector = ParseDetector(f.detector);
  if (!f.ood_classes.empty()) c.ood_classes = ToClassSet(f.ood_classes, "OOD class");
  if (!f.stuff_classes.empty()) {
    c.stuff_classes = ToClassSet(f.stuff_classes, "stuff class");
  }
  if (f.connectivity != 0) {
    c.connectivity = f.connectivity == 4 ? Connectivity::kFour : Connectivity::kEight;
  }
  c.deltas = f.deltas;
  c.iou_threshold = f.iou_threshold;
  c.pixel_filter = f.pixel_filter == "drop" ? PixelFilterMode::kDrop
                                             : PixelFilterMode::kZero;
  c.map_population = f.map_detected_only || f.map_population == "detected-only"
                         ? MapPopulation::kDetectedOnly
                         : MapPopulation::kWithMissed;
  c.detection_min_delta = f.detection_min_delta;
  c.histogram_bins = f.bins;
  return c;
}

int Run(int argc, char** argv) {
  CLI::App app{"Instance-aware OOD scoring and evaluation"};
  app.require_subcommand(1);

  // gen
  DatasetSpec spec;
  std::string gen_out;
  bool force = false;
  int gen_connectivity = 8;
  auto* gen = app.add_subcommand("gen", "Generate a seeded synthetic dataset");
  gen->add_option("--out", gen_out, "Dataset root to create")->required();
  gen->add_option("--n", spec.n_samples, "Number of samples")->capture_default_str();
  gen->add_option("--seed", spec.seed, "Master seed")->capture_default_str();
  gen->add_option("--height", spec.scene.height)->capture_default_str();
  gen->add_option("--width", spec.scene.width)->capture_default_str();
  gen->add_option("--objects", spec.scene.n_objects, "Objects per scene")
      ->capture_default_str();
  gen->add_option("--ood-fraction", spec.scene.ood_fraction)->capture_default_str();
  gen->add_option("--classes", spec.scene.classes, "Total classes C")
      ->capture_default_str();
  gen->add_option("--stuff-classes", spec.scene.stuff_classes,
                  "Background stuff classes S")
      ->capture_default_str();
  gen->add_option("--min-side", spec.scene.min_side)->capture_default_str();
  gen->add_option("--max-side", spec.scene.max_side)->capture_default_str();
  gen->add_option("--boundary-noise", spec.noise.boundary_noise)->capture_default_str();
  gen->add_option("--background-noise", spec.noise.background_noise)
      ->capture_default_str();
  gen->add_option("--ood-signal", spec.noise.ood_signal)->capture_default_str();
  gen->add_option("--in-dist-signal", spec.noise.in_dist_signal)->capture_default_str();
  gen->add_option("--sigma", spec.noise.sigma)->capture_default_str();
  gen->add_option("--erosion", spec.corruption.erosion,
                  "Detector mask erosion radius")
      ->capture_default_str();
  gen->add_option("--dilation", spec.corruption.dilation,
                  "Detector mask dilation radius")
      ->capture_default_str();
  gen->add_option("--drop", spec.corruption.drop_probability,
                  "Probability a detector misses an object")
      ->capture_default_str();
  gen->add_option("--ood-drop", spec.corruption.ood_drop_probability,
                  "Miss probability for OOD objects (default: --drop)");
  gen->add_option("--softmax-samples", spec.softmax_samples,
                  "Write this many softmax_tXX.iat stacks per sample")
      ->capture_default_str();
  gen->add_option("--connectivity", gen_connectivity)
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  gen->add_flag("--force", force, "Replace a non-empty output directory");

  // score
  std::string score_data;
  std::string score_method;
  auto* score = app.add_subcommand(
      "score", "Write score_<method>.iat per sample from softmax stacks");
  score->add_option("--data", score_data)->required();
  score->add_option("--method", score_method, "mcp | mcdropout")
      ->required()
      ->check(CLI::IsMember({"mcp", "mcdropout"}));

  EvalFlags pixel_flags;
  pixel_flags.detector = "none";
  auto* eval_pixel = app.add_subcommand("eval-pixel", "Pixel-wise evaluation");
  AddCommonEvalFlags(eval_pixel, pixel_flags, true, false);
  eval_pixel->add_option("--detector", pixel_flags.detector,
                         "none | file | gt: detector used to filter the map")
      ->check(CLI::IsMember({"none", "file", "gt"}))
      ->capture_default_str();

  EvalFlags instance_flags;
  instance_flags.detector = "file";
  auto* eval_instance =
      app.add_subcommand("eval-instance", "Instance-wise evaluation");
  AddCommonEvalFlags(eval_instance, instance_flags, false, true);
  eval_instance->add_option("--detector", instance_flags.detector, "file | gt")
      ->check(CLI::IsMember({"file", "gt"}))
      ->capture_default_str();
  eval_instance->add_flag("--overlays", instance_flags.overlays,
                          "Also write overlays/sample_XXXXX.ppm");

  EvalFlags overlay_flags;
  overlay_flags.detector = "file";
  std::size_t overlay_sample = 0;
  std::string overlay_path;
  std::string overlay_base = "error";
  auto* overlay = app.add_subcommand("overlay", "Render one sample as a PPM");
  overlay->add_option("--data", overlay_flags.data)->required();
  overlay->add_option("--sample", overlay_sample)->required();
  overlay->add_option("--out", overlay_path, "Output .ppm path")->required();
  overlay->add_option("--method", overlay_flags.method)
      ->check(CLI::IsMember({"obsnet-file", "mcp", "mcdropout"}));
  overlay->add_option("--detector", overlay_flags.detector)
      ->check(CLI::IsMember({"none", "file", "gt"}));
  overlay->add_option("--base", overlay_base, "error | semantic")
      ->check(CLI::IsMember({"error", "semantic"}));
  overlay->add_option("--min-detection-delta", overlay_flags.detection_min_delta);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFailure;
  }

  if (gen->parsed()) {
    spec.connectivity =
        gen_connectivity == 4 ? Connectivity::kFour : Connectivity::kEight;
    GenerateDataset(spec, gen_out, force);
    std::cerr << "wrote " << spec.n_samples << " samples to " << gen_out << "\n";
    return kExitOk;
  }
  if (score->parsed()) {
    ScoreDataset(score_data, ParseMethod(score_method));
    return kExitOk;
  }
  if (eval_pixel->parsed()) {
    const Evaluator evaluator(ToRunConfig(pixel_flags));
    const EvaluationReport report = evaluator.EvaluatePixels();
    WriteReportFiles(report, pixel_flags.out);
    std::cout << ReportCsv(report);
    return kExitOk;
  }
  if (eval_instance->parsed()) {
    const Evaluator evaluator(ToRunConfig(instance_flags));
    const fs::path out = instance_flags.out;
    const auto result = evaluator.EvaluateInstances(
        instance_flags.overlays ? std::optional<fs::path>(out / "overlays")
                                : std::nullopt);
    WriteReportFiles(result.report, out);
    WriteTextFile(HistogramCsv(result.histogram), out / "histogram.csv");
    std::cout << ReportCsv(result.report);
    if (result.report.HasNotComputable()) {
      std::cerr << "some metrics are not computable (NA): too few OOD or "
                   "in-distribution objects were detected\n";
      return kExitDegenerate;
    }
    return kExitOk;
  }
  if (overlay->parsed()) {
    const Evaluator evaluator(ToRunConfig(overlay_flags));
    evaluator.WriteSampleOverlay(
        overlay_sample,
        overlay_base == "semantic" ? OverlayBase::kSemantic : OverlayBase::kError,
        overlay_path);
    return kExitOk;
  }
  return kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const iaood::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == iaood::ErrorCode::kDegeneratePopulation ? kExitDegenerate
                                                               : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
