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

#include "iaood/report.h"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

namespace iaood {
namespace {

nlohmann::json OptionalValue(const std::optional<double>& v) {
  if (!v) return nullptr;
  return RoundMetric(*v);
}

std::string OptionalCell(const std::optional<double>& v) {
  return v ? FormatMetric(*v) : "NA";
}

}  // namespace

bool EvaluationReport::HasNotComputable() const {
  if (kind != "instance") return false;
  for (const MetricReport& row : rows) {
    if (!row.fpr95tpr || !row.auroc || !row.aupr || !row.map) return true;
  }
  return false;
}

std::string FormatMetric(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

double RoundMetric(double value) {
  return std::strtod(FormatMetric(value).c_str(), nullptr);
}

std::string ReportJson(const EvaluationReport& report) {
  nlohmann::json j;
  j["kind"] = report.kind;
  j["method"] = report.method;
  j["detector"] = report.detector;
  j["settings"] = {
      {"iou_threshold", report.settings.iou_threshold},
      {"connectivity", report.settings.connectivity},
      {"pixel_filter", report.settings.pixel_filter},
      {"map_population", report.settings.map_population},
      {"detection_min_delta", report.settings.detection_min_delta},
      {"ood_classes", report.settings.ood_classes},
      {"stuff_classes", report.settings.stuff_classes},
  };
  nlohmann::json results = nlohmann::json::array();
  for (const MetricReport& row : report.rows) {
    results.push_back({
        {"delta", row.delta},
        {"fpr95tpr", OptionalValue(row.fpr95tpr)},
        {"auroc", OptionalValue(row.auroc)},
        {"aupr", OptionalValue(row.aupr)},
        {"map", OptionalValue(row.map)},
        {"counts",
         {{"positives", row.counts.positives},
          {"negatives", row.counts.negatives},
          {"excluded", row.counts.excluded},
          {"missed_positives", row.counts.missed_positives}}},
    });
  }
  j["results"] = std::move(results);
  return j.dump(2) + "\n";
}

std::string ReportCsv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "method,detector,delta,fpr95tpr,auroc,aupr,map,positives,negatives,"
         "excluded,missed_positives\n";
  for (const MetricReport& row : report.rows) {
    out << report.method << ',' << report.detector << ',' << row.delta << ','
        << OptionalCell(row.fpr95tpr) << ',' << OptionalCell(row.auroc) << ','
        << OptionalCell(row.aupr) << ',' << OptionalCell(row.map) << ','
        << row.counts.positives << ',' << row.counts.negatives << ','
        << row.counts.excluded << ',' << row.counts.missed_positives << '\n';
  }
  return out.str();
}

std::string HistogramCsv(const ScoreHistogram& histogram) {
  std::ostringstream out;
  out << "bin_lo,bin_hi,count_in,count_ood\n";
  for (std::size_t k = 0; k < histogram.bins; ++k) {
    out << FormatMetric(histogram.BinLow(k)) << ','
        << FormatMetric(histogram.BinHigh(k)) << ',' << histogram.in_dist[k]
        << ',' << histogram.ood[k] << '\n';
  }
  return out.str();
}

}  // namespace iaood
