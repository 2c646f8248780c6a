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

#include "iaood/pipeline.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <exception>
#include <functional>

#include "iaood/overlay.h"
#include "iaood/score_maps.h"
#include "iaood/tensor_io.h"

namespace iaood {
namespace fs = std::filesystem;

namespace {

BinaryMask OodTruth(const SemanticLabelMap& semantic,
                    const std::set<std::uint8_t>& ood_classes) {
  std::array<std::uint8_t, 256> is_ood{};
  for (std::uint8_t c : ood_classes) is_ood[c] = 1;
  BinaryMask truth(semantic.height(), semantic.width());
  for (std::size_t i = 0; i < semantic.size(); ++i) truth[i] = is_ood[semantic[i]];
  return truth;
}

std::vector<SoftmaxStack> ReadSoftmaxSamples(const fs::path& dir) {
  std::vector<SoftmaxStack> stacks;
  for (std::size_t t = 0; fs::exists(dir / SoftmaxFileName(t)); ++t) {
    stacks.push_back(ReadSoftmaxStack(dir / SoftmaxFileName(t)));
  }
  if (stacks.empty()) {
    throw Error(ErrorCode::kMissingSample,
                "no softmax_tXX.iat files in " + dir.string());
  }
  return stacks;
}

ErrorMap ComputeBaseline(const fs::path& dir, Method method) {
  std::vector<SoftmaxStack> stacks = ReadSoftmaxSamples(dir);
  if (method == Method::kMcp) return McpScore(stacks.front());
  return MeanSoftmaxEntropy(stacks);
}

// Runs fn(i) for every sample in parallel and rethrows the lowest-index
// failure, so errors are as deterministic as results.
template <typename Fn>
void ForEachSample(std::size_t count, Fn&& fn) {
  std::vector<std::exception_ptr> failures(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      failures[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

std::vector<int> ToInts(const std::set<std::uint8_t>& values) {
  return {values.begin(), values.end()};
}

std::string OverlayFileName(std::size_t index) {
  return SampleDirName(index) + ".ppm";
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kObsnetFile: return "obsnet-file";
    case Method::kMcp: return "mcp";
    case Method::kMcDropout: return "mcdropout";
  }
  return "?";
}

std::string_view DetectorName(DetectorKind detector) {
  switch (detector) {
    case DetectorKind::kNone: return "none";
    case DetectorKind::kFile: return "file";
    case DetectorKind::kGt: return "gt";
  }
  return "?";
}

Method ParseMethod(std::string_view name) {
  for (Method m : {Method::kObsnetFile, Method::kMcp, Method::kMcDropout}) {
    if (MethodName(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method " + std::string(name));
}

DetectorKind ParseDetector(std::string_view name) {
  for (DetectorKind d : {DetectorKind::kNone, DetectorKind::kFile, DetectorKind::kGt}) {
    if (DetectorName(d) == name) return d;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown detector " + std::string(name));
}

std::string ScoreFileName(Method method) {
  return "score_" + std::string(MethodName(method)) + ".iat";
}

Evaluator::Evaluator(RunConfig config)
    : config_(std::move(config)), manifest_(ReadManifest(config_.dataset_root)) {
  ood_classes_ = config_.ood_classes.value_or(manifest_.ood_classes);
  stuff_classes_ = config_.stuff_classes.value_or(manifest_.stuff_classes);
  connectivity_ = config_.connectivity.value_or(manifest_.spec.connectivity);
  if (ood_classes_.empty()) {
    throw Error(ErrorCode::kDegeneratePopulation, "the OOD class set is empty");
  }
  if (config_.deltas.empty() ||
      std::adjacent_find(config_.deltas.begin(), config_.deltas.end(),
                         std::greater_equal<>()) != config_.deltas.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "delta list must be non-empty and strictly ascending");
  }
  if (!(config_.iou_threshold >= 0.0 && config_.iou_threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "IoU threshold must be in [0, 1)");
  }
  if (config_.histogram_bins == 0) {
    throw Error(ErrorCode::kInvalidArgument, "histogram needs >= 1 bin");
  }
}

SampleInputs Evaluator::LoadSample(std::size_t index) const {
  if (index >= manifest_.sample_dirs.size()) {
    throw Error(ErrorCode::kMissingSample,
                "sample " + std::to_string(index) + " not in manifest");
  }
  const fs::path dir = config_.dataset_root / manifest_.sample_dirs[index];
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kMissingSample, dir.string() + " does not exist");
  }
  SampleInputs in;
  in.semantic = ReadSemanticMap(dir / kSemanticFile);
  switch (config_.method) {
    case Method::kObsnetFile:
      in.score_map = ReadErrorMap(dir / kErrorFile);
      break;
    case Method::kMcp:
    case Method::kMcDropout: {
      const fs::path cached = dir / ScoreFileName(config_.method);
      in.score_map = fs::exists(cached) ? ReadErrorMap(cached)
                                        : ComputeBaseline(dir, config_.method);
      break;
    }
  }
  switch (config_.detector) {
    case DetectorKind::kNone:
      break;
    case DetectorKind::kFile:
      in.detections = ReadInstanceMap(dir / kDetInstancesFile);
      break;
    case DetectorKind::kGt:
      in.detections = GtDetector(in.semantic, connectivity_, stuff_classes_);
      break;
  }
  CheckSameShape(in.semantic, in.score_map, "score map vs semantic map");
  if (config_.detector != DetectorKind::kNone) {
    CheckSameShape(in.semantic, in.detections, "detections vs semantic map");
  }
  return in;
}

ReportSettings Evaluator::Settings() const {
  ReportSettings s;
  s.iou_threshold = config_.iou_threshold;
  s.connectivity = static_cast<int>(connectivity_);
  s.pixel_filter = config_.pixel_filter == PixelFilterMode::kZero ? "zero" : "drop";
  s.map_population = config_.map_population == MapPopulation::kWithMissed
                         ? "with-missed"
                         : "detected-only";
  s.detection_min_delta = config_.detection_min_delta;
  s.ood_classes = ToInts(ood_classes_);
  s.stuff_classes = ToInts(stuff_classes_);
  return s;
}

std::vector<ScoredInstance> Evaluator::ScoreDetections(
    const SampleInputs& inputs) const {
  const auto scored = AggregateInstanceScores(inputs.score_map, inputs.detections);
  return SizeFilter(scored, SizeThreshold(config_.detection_min_delta));
}

EvaluationReport Evaluator::EvaluatePixels() const {
  std::vector<ScoredPopulation> per_sample(sample_count());
  std::vector<std::size_t> pixels(sample_count(), 0);
  ForEachSample(sample_count(), [&](std::size_t i) {
    const SampleInputs in = LoadSample(i);
    const BinaryMask truth = OodTruth(in.semantic, ood_classes_);
    pixels[i] = truth.size();
    if (config_.detector == DetectorKind::kNone) {
      per_sample[i] = PixelPopulation(in.score_map, truth);
    } else if (config_.pixel_filter == PixelFilterMode::kZero) {
      per_sample[i] =
          PixelPopulation(FilterErrorMap(in.score_map, in.detections), truth);
    } else {
      per_sample[i] = CoveredPixelPopulation(in.score_map, truth, in.detections);
    }
  });

  ScoredPopulation pooled;
  std::size_t total_pixels = 0;
  std::size_t pooled_size = 0;
  for (std::size_t i = 0; i < per_sample.size(); ++i) {
    total_pixels += pixels[i];
    pooled_size += per_sample[i].size();
  }
  pooled.Reserve(pooled_size);
  for (ScoredPopulation& p : per_sample) {
    pooled.Append(p);
    p = ScoredPopulation();
  }

  const RankSweep sweep(pooled);
  if (sweep.total_positive() == 0.0 || sweep.total_negative() == 0.0) {
    throw Error(ErrorCode::kDegeneratePopulation,
                "pooled pixel population has " +
                    std::to_string(static_cast<std::size_t>(sweep.total_positive())) +
                    " OOD and " +
                    std::to_string(static_cast<std::size_t>(sweep.total_negative())) +
                    " in-distribution pixels");
  }
  MetricReport row;
  row.delta = 0;
  row.fpr95tpr = FprAtTpr(sweep);
  row.auroc = Auroc(sweep);
  row.aupr = Aupr(sweep);
  row.counts.positives = static_cast<std::size_t>(sweep.total_positive());
  row.counts.negatives = static_cast<std::size_t>(sweep.total_negative());
  row.counts.excluded = total_pixels - pooled.size();

  EvaluationReport report;
  report.kind = "pixel";
  report.method = MethodName(config_.method);
  report.detector = DetectorName(config_.detector);
  report.settings = Settings();
  report.rows.push_back(row);
  return report;
}

std::vector<MetricReport> InstanceRows(std::span<const MatchRecord> records,
                                       std::span<const MissedInstance> missed,
                                       std::span<const std::size_t> deltas,
                                       MapPopulation map_population) {
  std::vector<MetricReport> rows;
  for (std::size_t delta : deltas) {
    const SizeThreshold threshold(delta);
    MetricReport row;
    row.delta = delta;
    ScoredPopulation population;
    for (const MatchRecord& r : records) {
      if (!threshold.Keeps(r.detection_area) || r.label == MatchLabel::kUnmatched) {
        ++row.counts.excluded;
        continue;
      }
      const bool positive = r.label == MatchLabel::kOod;
      population.Add(r.score, positive);
      ++(positive ? row.counts.positives : row.counts.negatives);
    }
    row.counts.missed_positives = static_cast<std::size_t>(
        std::count_if(missed.begin(), missed.end(),
                      [&](const MissedInstance& m) { return threshold.Keeps(m.area); }));
    const RankSweep sweep(population);
    if (row.counts.positives > 0 && row.counts.negatives > 0) {
      row.fpr95tpr = FprAtTpr(sweep);
      row.auroc = Auroc(sweep);
    }
    if (row.counts.positives > 0) row.aupr = Aupr(sweep);
    row.map = MapDelta(records, missed, threshold, map_population);
    rows.push_back(row);
  }
  return rows;
}

Evaluator::InstanceResult Evaluator::EvaluateInstances(
    const std::optional<fs::path>& overlay_dir) const {
  if (config_.detector == DetectorKind::kNone) {
    throw Error(ErrorCode::kInvalidArgument,
                "instance evaluation needs a detector (file or gt)");
  }
  if (overlay_dir) fs::create_directories(*overlay_dir);
  std::vector<MatchResult> per_sample(sample_count());
  ForEachSample(sample_count(), [&](std::size_t i) {
    const SampleInputs in = LoadSample(i);
    const auto scored = ScoreDetections(in);
    const InstanceLabelMap gt = GtDetector(in.semantic, connectivity_, stuff_classes_);
    per_sample[i] = MatchInstances(scored, in.detections, gt, in.semantic,
                                   ood_classes_, config_.iou_threshold);
    if (overlay_dir) {
      WriteOverlay(in.score_map, in.detections, scored,
                   *overlay_dir / OverlayFileName(i));
    }
  });

  std::vector<MatchRecord> records;
  std::vector<MissedInstance> missed;
  for (const MatchResult& r : per_sample) {
    records.insert(records.end(), r.records.begin(), r.records.end());
    missed.insert(missed.end(), r.missed.begin(), r.missed.end());
  }

  InstanceResult result;
  result.report.kind = "instance";
  result.report.method = MethodName(config_.method);
  result.report.detector = DetectorName(config_.detector);
  result.report.settings = Settings();
  result.report.rows =
      InstanceRows(records, missed, config_.deltas, config_.map_population);
  result.histogram = BuildScoreHistogram(records, config_.histogram_bins);
  return result;
}

void Evaluator::WriteSampleOverlay(std::size_t index, OverlayBase base,
                                   const fs::path& path) const {
  const SampleInputs in = LoadSample(index);
  std::vector<ScoredInstance> scored;
  InstanceLabelMap detections = in.detections;
  if (config_.detector == DetectorKind::kNone) {
    detections = InstanceLabelMap(in.semantic.height(), in.semantic.width());
  } else {
    scored = ScoreDetections(in);
  }
  if (base == OverlayBase::kError) {
    WriteOverlay(in.score_map, detections, scored, path);
  } else {
    WriteOverlay(in.semantic, detections, scored, path);
  }
}

void ScoreDataset(const fs::path& root, Method method) {
  if (method == Method::kObsnetFile) {
    throw Error(ErrorCode::kInvalidArgument,
                "score computes mcp or mcdropout maps; obsnet maps come as files");
  }
  const Manifest manifest = ReadManifest(root);
  ForEachSample(manifest.sample_dirs.size(), [&](std::size_t i) {
    const fs::path dir = root / manifest.sample_dirs[i];
    if (!fs::is_directory(dir)) {
      throw Error(ErrorCode::kMissingSample, dir.string() + " does not exist");
    }
    WriteTensor(ComputeBaseline(dir, method), dir / ScoreFileName(method));
  });
}

void WriteTextFile(const std::string& text, const fs::path& path) {
  WriteFileBytes(std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                           text.size()),
                 path);
}

void WriteReportFiles(const EvaluationReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  WriteTextFile(ReportJson(report), dir / "report.json");
  WriteTextFile(ReportCsv(report), dir / "report.csv");
}

}  // namespace iaood
