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

#ifndef IAOOD_REPORT_H_
#define IAOOD_REPORT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iaood/metrics.h"

namespace iaood {

struct PopulationCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
  // Entries left out of the ROC-family population (unmatched detections,
  // entries below the size threshold, dropped pixels).
  std::size_t excluded = 0;
  std::size_t missed_positives = 0;

  bool operator==(const PopulationCounts&) const = default;
};

// One evaluation row. nullopt is the not-computable marker.
struct MetricReport {
  std::size_t delta = 0;
  std::optional<double> fpr95tpr;
  std::optional<double> auroc;
  std::optional<double> aupr;
  std::optional<double> map;
  PopulationCounts counts;
};

struct ReportSettings {
  double iou_threshold = 0.5;
  int connectivity = 8;
  std::string pixel_filter;
  std::string map_population;
  std::size_t detection_min_delta = 0;
  std::vector<int> ood_classes;
  std::vector<int> stuff_classes;
};

struct EvaluationReport {
  std::string kind;  // "pixel" or "instance"
  std::string method;
  std::string detector;
  ReportSettings settings;
  std::vector<MetricReport> rows;

  // True when an instance row carries a not-computable marker.
  bool HasNotComputable() const;
};

// 12 significant digits, shared by the JSON and CSV writers.
std::string FormatMetric(double value);
double RoundMetric(double value);

std::string ReportJson(const EvaluationReport& report);
std::string ReportCsv(const EvaluationReport& report);
// bin_lo,bin_hi,count_in,count_ood
std::string HistogramCsv(const ScoreHistogram& histogram);

}  // namespace iaood

#endif  // IAOOD_REPORT_H_
