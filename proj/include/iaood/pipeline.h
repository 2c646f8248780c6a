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

#ifndef IAOOD_PIPELINE_H_
#define IAOOD_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "iaood/dataset.h"
#include "iaood/instances.h"
#include "iaood/matching.h"
#include "iaood/metrics.h"
#include "iaood/report.h"

namespace iaood {

enum class Method { kObsnetFile, kMcp, kMcDropout };
enum class DetectorKind { kNone, kFile, kGt };
enum class PixelFilterMode { kZero, kDrop };
enum class OverlayBase { kError, kSemantic };

std::string_view MethodName(Method method);
std::string_view DetectorName(DetectorKind detector);
Method ParseMethod(std::string_view name);
DetectorKind ParseDetector(std::string_view name);

// Everything an evaluation run depends on. Unset optionals fall back to the
// dataset manifest.
struct RunConfig {
  std::filesystem::path dataset_root;
  Method method = Method::kObsnetFile;
  DetectorKind detector = DetectorKind::kFile;
  std::optional<std::set<std::uint8_t>> ood_classes;
  std::optional<std::set<std::uint8_t>> stuff_classes;
  std::optional<Connectivity> connectivity;
  std::vector<std::size_t> deltas = {0, 16, 32, 48};
  double iou_threshold = kDefaultIouThreshold;
  PixelFilterMode pixel_filter = PixelFilterMode::kZero;
  MapPopulation map_population = MapPopulation::kWithMissed;
  // Size filter applied to detections before matching.
  std::size_t detection_min_delta = 0;
  std::size_t histogram_bins = 20;
};

// File the "score" command writes for a baseline method.
std::string ScoreFileName(Method method);

// Per-sample inputs after resolving method and detector.
struct SampleInputs {
  SemanticLabelMap semantic;
  ErrorMap score_map;
  InstanceLabelMap detections;  // empty grid for DetectorKind::kNone
};

class Evaluator {
 public:
  // Validates the config against the dataset manifest.
  explicit Evaluator(RunConfig config);

  const RunConfig& config() const { return config_; }
  const Manifest& manifest() const { return manifest_; }
  std::size_t sample_count() const { return manifest_.sample_dirs.size(); }
  const std::set<std::uint8_t>& ood_classes() const { return ood_classes_; }
  const std::set<std::uint8_t>& stuff_classes() const { return stuff_classes_; }
  Connectivity connectivity() const { return connectivity_; }

  SampleInputs LoadSample(std::size_t index) const;

  // Pooled pixel population; throws kDegeneratePopulation when the pooled
  // set lacks OOD pixels or in-distribution pixels.
  EvaluationReport EvaluatePixels() const;

  struct InstanceResult {
    EvaluationReport report;
    ScoreHistogram histogram;
  };
  // When overlay_dir is set, one PPM per sample is written there.
  InstanceResult EvaluateInstances(
      const std::optional<std::filesystem::path>& overlay_dir = std::nullopt) const;

  void WriteSampleOverlay(std::size_t index, OverlayBase base,
                          const std::filesystem::path& path) const;

 private:
  ReportSettings Settings() const;
  std::vector<ScoredInstance> ScoreDetections(const SampleInputs& inputs) const;

  RunConfig config_;
  Manifest manifest_;
  std::set<std::uint8_t> ood_classes_;
  std::set<std::uint8_t> stuff_classes_;
  Connectivity connectivity_ = Connectivity::kEight;
};

// Per-delta instance rows from pooled match results.
std::vector<MetricReport> InstanceRows(std::span<const MatchRecord> records,
                                       std::span<const MissedInstance> missed,
                                       std::span<const std::size_t> deltas,
                                       MapPopulation map_population);

// Writes score_<method>.iat into every sample from its softmax files.
void ScoreDataset(const std::filesystem::path& root, Method method);

void WriteTextFile(const std::string& text, const std::filesystem::path& path);
// report.json and report.csv under dir.
void WriteReportFiles(const EvaluationReport& report,
                      const std::filesystem::path& dir);

}  // namespace iaood

#endif  // IAOOD_PIPELINE_H_
