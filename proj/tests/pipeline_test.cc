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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include "json.hpp"

#include "iaood/dataset.h"
#include "iaood/pipeline.h"
#include "iaood/report.h"
#include "iaood/tensor_io.h"
#include "support/expect_error.h"

namespace iaood {
namespace {

namespace fs = std::filesystem;

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::path(::testing::TempDir()) /
            ("iaood_pipeline_" +
             std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  static DatasetSpec SmallSpec(std::uint64_t seed = 1) {
    DatasetSpec spec;
    spec.n_samples = 3;
    spec.seed = seed;
    spec.scene.height = 64;
    spec.scene.width = 64;
    spec.scene.n_objects = 4;
    spec.scene.min_side = 10;
    spec.scene.max_side = 24;
    return spec;
  }

  RunConfig Config(Method method = Method::kObsnetFile,
                   DetectorKind detector = DetectorKind::kGt) const {
    RunConfig c;
    c.dataset_root = root_;
    c.method = method;
    c.detector = detector;
    return c;
  }

  fs::path root_;
};

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

TEST_F(PipelineTest, EmptyDatasetIsManifestOnly) {
  DatasetSpec spec = SmallSpec();
  spec.n_samples = 0;
  GenerateDataset(spec, root_);
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(root_)) entries.push_back(e.path());
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].filename(), kManifestFile);
  const Evaluator eval(Config());
  EXPECT_EQ(eval.sample_count(), 0u);
  EXPECT_IAOOD_ERROR(eval.EvaluatePixels(), ErrorCode::kDegeneratePopulation);
}

TEST_F(PipelineTest, GenerationIsDeterministic) {
  DatasetSpec spec = SmallSpec(7);
  spec.noise = {0.5, 0.2, 0.8, 0.3, 0.1};
  spec.corruption = {1, 2, 0.2};
  spec.softmax_samples = 2;
  GenerateDataset(spec, root_ / "a");
  GenerateDataset(spec, root_ / "b");
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(root_ / "a")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), root_ / "a");
    ASSERT_EQ(ReadFileBytes(root_ / "b" / rel), ReadFileBytes(e.path())) << rel;
    ++files;
  }
  EXPECT_EQ(files, 1u + 3u * 6u);
}

TEST_F(PipelineTest, RefusesNonEmptyRootUnlessForced) {
  GenerateDataset(SmallSpec(), root_);
  EXPECT_IAOOD_ERROR(GenerateDataset(SmallSpec(), root_), ErrorCode::kIoFailure);
  EXPECT_NO_THROW(GenerateDataset(SmallSpec(2), root_, /*force=*/true));
  EXPECT_EQ(ReadManifest(root_).spec.seed, 2u);
}

TEST_F(PipelineTest, PlacementOverflowRemovesPartialOutput) {
  DatasetSpec spec = SmallSpec();
  spec.scene.height = 16;
  spec.scene.width = 16;
  spec.scene.min_side = 12;
  spec.scene.max_side = 14;
  EXPECT_IAOOD_ERROR(GenerateDataset(spec, root_), ErrorCode::kPlacementOverflow);
  EXPECT_FALSE(fs::exists(root_));
}

TEST_F(PipelineTest, ManifestIsSelfDescribing) {
  DatasetSpec spec = SmallSpec();
  spec.scene.stuff_classes = 3;
  spec.scene.classes = 7;
  spec.connectivity = Connectivity::kFour;
  GenerateDataset(spec, root_);
  const Manifest m = ReadManifest(root_);
  EXPECT_EQ(m.ood_classes, std::set<std::uint8_t>{6});
  EXPECT_EQ(m.stuff_classes, (std::set<std::uint8_t>{0, 1, 2}));
  EXPECT_EQ(m.sample_dirs.size(), 3u);
  EXPECT_EQ(ManifestJson(m.spec), ManifestJson(spec));
  const Evaluator eval(Config());
  EXPECT_EQ(eval.connectivity(), Connectivity::kFour);
  const auto report = eval.EvaluateInstances().report;
  EXPECT_EQ(report.settings.connectivity, 4);
  EXPECT_EQ(report.settings.ood_classes, std::vector<int>{6});
  EXPECT_EQ(report.settings.stuff_classes, (std::vector<int>{0, 1, 2}));
}

TEST_F(PipelineTest, PerfectSignalIsExact) {
  GenerateDataset(SmallSpec(), root_);
  RunConfig config = Config();
  // Objects here are at most 24 x 24, so larger deltas would discard them all.
  config.deltas = {0, 4, 8, 10};
  const Evaluator eval(config);
  const auto pixel = eval.EvaluatePixels();
  ASSERT_EQ(pixel.rows.size(), 1u);
  EXPECT_EQ(pixel.rows[0].auroc, 1.0);
  EXPECT_EQ(pixel.rows[0].fpr95tpr, 0.0);
  EXPECT_EQ(pixel.rows[0].aupr, 1.0);
  const auto instance = eval.EvaluateInstances();
  ASSERT_EQ(instance.report.rows.size(), 4u);
  for (const MetricReport& row : instance.report.rows) {
    EXPECT_EQ(row.auroc, 1.0);
    EXPECT_EQ(row.fpr95tpr, 0.0);
    EXPECT_EQ(row.map, 1.0);
    EXPECT_EQ(row.counts.missed_positives, 0u);
  }
  EXPECT_FALSE(instance.report.HasNotComputable());
}

TEST_F(PipelineTest, GtFilterRaisesPixelAupr) {
  DatasetSpec spec = SmallSpec(3);
  spec.noise = {0.9, 0.0, 0.5, 0.0, 0.0};
  GenerateDataset(spec, root_);
  const double none = *Evaluator(Config(Method::kObsnetFile, DetectorKind::kNone))
                           .EvaluatePixels().rows[0].aupr;
  const double gt = *Evaluator(Config()).EvaluatePixels().rows[0].aupr;
  EXPECT_LT(none, gt);
}

TEST_F(PipelineTest, DropFilterExcludesUncoveredPixels) {
  DatasetSpec spec = SmallSpec(4);
  spec.noise = {0.3, 0.2, 0.8, 0.2, 0.1};
  GenerateDataset(spec, root_);
  RunConfig zero = Config();
  RunConfig drop = Config();
  drop.pixel_filter = PixelFilterMode::kDrop;
  const auto z = Evaluator(zero).EvaluatePixels().rows[0].counts;
  const auto d = Evaluator(drop).EvaluatePixels().rows[0].counts;
  EXPECT_EQ(z.positives + z.negatives, 3u * 64u * 64u);
  EXPECT_EQ(z.excluded, 0u);
  EXPECT_EQ(d.positives + d.negatives + d.excluded, 3u * 64u * 64u);
  EXPECT_GT(d.excluded, 0u);
  // GT masks cover every OOD pixel.
  EXPECT_EQ(d.positives, z.positives);
}

TEST_F(PipelineTest, JsonAndCsvAgree) {
  DatasetSpec spec = SmallSpec(5);
  spec.noise = {0.4, 0.2, 0.7, 0.3, 0.2};
  spec.corruption = {1, 2, 0.1};
  GenerateDataset(spec, root_);
  const auto result = Evaluator(Config(Method::kObsnetFile, DetectorKind::kFile))
                          .EvaluateInstances();
  const auto json = nlohmann::json::parse(ReportJson(result.report));
  std::stringstream csv(ReportCsv(result.report));
  std::string line;
  std::getline(csv, line);
  const auto header = Split(line);
  ASSERT_EQ(header.size(), 11u);
  std::size_t row = 0;
  while (std::getline(csv, line)) {
    const auto fields = Split(line);
    ASSERT_EQ(fields.size(), header.size());
    const auto& j = json["results"][row++];
    EXPECT_EQ(fields[2], std::to_string(j["delta"].get<std::size_t>()));
    for (std::size_t k = 3; k <= 6; ++k) {
      const auto& v = j[header[k]];
      EXPECT_EQ(fields[k], v.is_null() ? "NA" : FormatMetric(v.get<double>()))
          << header[k];
    }
    for (std::size_t k = 7; k <= 10; ++k) {
      EXPECT_EQ(fields[k], std::to_string(j["counts"][header[k]].get<std::size_t>()));
    }
  }
  EXPECT_EQ(row, 4u);
  EXPECT_EQ(result.histogram.Total(),
            result.report.rows[0].counts.positives + result.report.rows[0].counts.negatives +
                result.report.rows[0].counts.excluded);
}

TEST_F(PipelineTest, CachedScoresMatchOnTheFlyScores) {
  DatasetSpec spec = SmallSpec(6);
  spec.noise = {0.3, 0.1, 0.8, 0.2, 0.1};
  spec.softmax_samples = 3;
  GenerateDataset(spec, root_);
  for (Method m : {Method::kMcp, Method::kMcDropout}) {
    const std::string before =
        ReportJson(Evaluator(Config(m)).EvaluateInstances().report);
    ScoreDataset(root_, m);
    EXPECT_TRUE(fs::exists(root_ / "sample_00000" / ScoreFileName(m)));
    EXPECT_EQ(ReportJson(Evaluator(Config(m)).EvaluateInstances().report), before);
  }
}

TEST_F(PipelineTest, BaselineWithoutSoftmaxFails) {
  GenerateDataset(SmallSpec(), root_);
  EXPECT_IAOOD_ERROR(Evaluator(Config(Method::kMcp)).EvaluatePixels(),
                     ErrorCode::kMissingSample);
}

TEST_F(PipelineTest, MissingSampleAndBadConfig) {
  GenerateDataset(SmallSpec(), root_);
  fs::remove_all(root_ / "sample_00001");
  EXPECT_IAOOD_ERROR(Evaluator(Config()).EvaluatePixels(), ErrorCode::kMissingSample);
  EXPECT_IAOOD_ERROR(Evaluator(Config()).LoadSample(9), ErrorCode::kMissingSample);

  RunConfig c = Config();
  c.deltas = {16, 0};
  EXPECT_IAOOD_ERROR(Evaluator{c}, ErrorCode::kInvalidArgument);
  c = Config();
  c.ood_classes = std::set<std::uint8_t>{};
  EXPECT_IAOOD_ERROR(Evaluator{c}, ErrorCode::kDegeneratePopulation);
  c = Config();
  c.dataset_root = root_ / "nowhere";
  EXPECT_IAOOD_ERROR(Evaluator{c}, ErrorCode::kIoFailure);
}

TEST_F(PipelineTest, DroppedOodObjectsAreNotComputable) {
  DatasetSpec spec = SmallSpec(8);
  spec.corruption.ood_drop_probability = 1.0;
  GenerateDataset(spec, root_);
  const auto result =
      Evaluator(Config(Method::kObsnetFile, DetectorKind::kFile)).EvaluateInstances();
  EXPECT_TRUE(result.report.HasNotComputable());
  for (const MetricReport& row : result.report.rows) {
    EXPECT_FALSE(row.auroc.has_value());
    EXPECT_FALSE(row.fpr95tpr.has_value());
    EXPECT_FALSE(row.aupr.has_value());
    EXPECT_EQ(row.counts.positives, 0u);
  }
  // Missed OOD objects still count in the mAP denominator.
  EXPECT_EQ(result.report.rows[0].map, 0.0);
}

TEST_F(PipelineTest, ErodedMasksNeverBeatGtMasks) {
  DatasetSpec spec = SmallSpec();
  spec.n_samples = 2;
  spec.noise = {0.3, 0.2, 0.8, 0.3, 0.2};
  spec.corruption = {2, 1, 0.0};
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    spec.seed = seed;
    GenerateDataset(spec, root_, /*force=*/true);
    const auto gt = Evaluator(Config()).EvaluateInstances().report.rows[0].map;
    const auto det = Evaluator(Config(Method::kObsnetFile, DetectorKind::kFile))
                         .EvaluateInstances().report.rows[0].map;
    ASSERT_TRUE(gt.has_value());
    ASSERT_TRUE(det.has_value());
    wins += *gt >= *det;
  }
  EXPECT_EQ(wins, 50);
}

TEST_F(PipelineTest, OverlaysAreWrittenPerSample) {
  GenerateDataset(SmallSpec(), root_);
  const fs::path out = root_ / "overlays";
  Evaluator(Config(Method::kObsnetFile, DetectorKind::kFile)).EvaluateInstances(out);
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "sample_%05d.ppm", i);
    EXPECT_EQ(fs::file_size(out / name), std::string("P6 64 64 255\n").size() + 3 * 64 * 64);
  }
}

TEST(InstanceRowsTest, CountsPerDelta) {
  auto rec = [](double s, MatchLabel l, std::size_t area) {
    MatchRecord r;
    r.score = s;
    r.label = l;
    r.detection_area = area;
    return r;
  };
  const std::vector<MatchRecord> records = {
      rec(0.9, MatchLabel::kOod, 300), rec(0.2, MatchLabel::kInDist, 1000),
      rec(0.8, MatchLabel::kUnmatched, 50)};
  const std::vector<MissedInstance> missed = {{4, 2000}};
  const std::vector<std::size_t> deltas = {0, 16, 32};
  const auto rows = InstanceRows(records, missed, deltas, MapPopulation::kWithMissed);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].counts, (PopulationCounts{1, 1, 1, 1}));
  EXPECT_EQ(rows[0].auroc, 1.0);
  // Ranked: unmatched 0.8 would sit above nothing; OOD first -> P=1 at R=1/2.
  EXPECT_DOUBLE_EQ(*rows[0].map, 0.5);
  EXPECT_EQ(rows[1].counts, (PopulationCounts{1, 1, 1, 1}));
  EXPECT_EQ(rows[2].counts, (PopulationCounts{0, 0, 3, 1}));
  EXPECT_FALSE(rows[2].auroc.has_value());
  EXPECT_EQ(rows[2].map, 0.0);
}

}  // namespace
}  // namespace iaood
