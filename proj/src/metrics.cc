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

#include "iaood/metrics.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace iaood {
namespace {

struct WeightedScore {
  double score;
  double weight;
};

void RequireRocPopulation(const RankSweep& sweep) {
  if (!(sweep.total_positive() > 0.0) || !(sweep.total_negative() > 0.0)) {
    throw Error(ErrorCode::kDegeneratePopulation,
                "need at least one positive and one negative");
  }
}

void RequirePositives(const RankSweep& sweep) {
  if (!(sweep.total_positive() > 0.0)) {
    throw Error(ErrorCode::kDegeneratePopulation, "no positives");
  }
}

// Sum over recall increments of the precision at that step.
double AveragePrecision(std::span<const SweepStep> steps, double denominator) {
  double ap = 0.0;
  double prev_tp = 0.0;
  for (const SweepStep& s : steps) {
    if (s.tp > prev_tp) {
      ap += (s.tp - prev_tp) / denominator * (s.tp / (s.tp + s.fp));
      prev_tp = s.tp;
    }
  }
  return ap;
}

}  // namespace

void ScoredPopulation::Reserve(std::size_t n) {
  scores_.reserve(n);
  labels_.reserve(n);
}

void ScoredPopulation::MaterialiseWeights() {
  if (weighted_) return;
  weights_.assign(scores_.size(), 1.0);
  weighted_ = true;
}

void ScoredPopulation::Add(double score, bool positive) {
  scores_.push_back(score);
  labels_.push_back(positive ? 1 : 0);
  if (weighted_) weights_.push_back(1.0);
}

void ScoredPopulation::Add(double score, bool positive, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::kInvalidArgument, "weights must be finite and >= 0");
  }
  if (weight != 1.0) MaterialiseWeights();
  scores_.push_back(score);
  labels_.push_back(positive ? 1 : 0);
  if (weighted_) weights_.push_back(weight);
}

void ScoredPopulation::Append(const ScoredPopulation& other) {
  if (other.weighted_) MaterialiseWeights();
  scores_.insert(scores_.end(), other.scores_.begin(), other.scores_.end());
  labels_.insert(labels_.end(), other.labels_.begin(), other.labels_.end());
  if (other.weighted_) {
    weights_.insert(weights_.end(), other.weights_.begin(),
                    other.weights_.end());
  } else if (weighted_) {
    weights_.resize(scores_.size(), 1.0);
  }
}

double ScoredPopulation::PositiveWeight() const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (labels_[i]) total += weight(i);
  }
  return total;
}

double ScoredPopulation::NegativeWeight() const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!labels_[i]) total += weight(i);
  }
  return total;
}

RankSweep::RankSweep(const ScoredPopulation& population) {
  const auto scores = population.scores();
  const auto labels = population.labels();
  for (double s : scores) {
    if (std::isnan(s)) {
      throw Error(ErrorCode::kInvalidArgument, "NaN score in population");
    }
  }

  if (!population.weighted()) {
    // Sorting positives and negatives apart keeps the working set to one
    // double per entry, which matters for 10^7-pixel populations.
    std::vector<double> pos;
    std::vector<double> neg;
    const std::size_t n_pos =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    pos.reserve(n_pos);
    neg.reserve(scores.size() - n_pos);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      (labels[i] ? pos : neg).push_back(scores[i]);
    }
    std::sort(pos.begin(), pos.end(), std::greater<>());
    std::sort(neg.begin(), neg.end(), std::greater<>());
    total_positive_ = static_cast<double>(pos.size());
    total_negative_ = static_cast<double>(neg.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < pos.size() || j < neg.size()) {
      double threshold = -std::numeric_limits<double>::infinity();
      if (i < pos.size()) threshold = pos[i];
      if (j < neg.size()) threshold = std::max(threshold, neg[j]);
      while (i < pos.size() && pos[i] == threshold) ++i;
      while (j < neg.size() && neg[j] == threshold) ++j;
      steps_.push_back(
          {threshold, static_cast<double>(i), static_cast<double>(j)});
    }
    return;
  }

  std::vector<WeightedScore> pos;
  std::vector<WeightedScore> neg;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    (labels[i] ? pos : neg).push_back({scores[i], population.weight(i)});
  }
  auto by_score_desc = [](const WeightedScore& a, const WeightedScore& b) {
    return a.score > b.score;
  };
  std::sort(pos.begin(), pos.end(), by_score_desc);
  std::sort(neg.begin(), neg.end(), by_score_desc);
  double tp = 0.0;
  double fp = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < pos.size() || j < neg.size()) {
    double threshold = -std::numeric_limits<double>::infinity();
    if (i < pos.size()) threshold = pos[i].score;
    if (j < neg.size()) threshold = std::max(threshold, neg[j].score);
    for (; i < pos.size() && pos[i].score == threshold; ++i) tp += pos[i].weight;
    for (; j < neg.size() && neg[j].score == threshold; ++j) fp += neg[j].weight;
    steps_.push_back({threshold, tp, fp});
  }
  total_positive_ = tp;
  total_negative_ = fp;
}

std::vector<RocPoint> RocPoints(const RankSweep& sweep) {
  RequireRocPopulation(sweep);
  std::vector<RocPoint> points;
  points.reserve(sweep.steps().size() + 1);
  points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  for (const SweepStep& s : sweep.steps()) {
    points.push_back({s.fp / sweep.total_negative(),
                      s.tp / sweep.total_positive(), s.threshold});
  }
  return points;
}

double Auroc(const RankSweep& sweep) {
  RequireRocPopulation(sweep);
  // Trapezoids in raw counts, normalised once at the end.
  double area = 0.0;
  double prev_tp = 0.0;
  double prev_fp = 0.0;
  for (const SweepStep& s : sweep.steps()) {
    area += (s.fp - prev_fp) * (s.tp + prev_tp) * 0.5;
    prev_tp = s.tp;
    prev_fp = s.fp;
  }
  return area / (sweep.total_positive() * sweep.total_negative());
}

double FprAtTpr(const RankSweep& sweep, double target_tpr) {
  RequireRocPopulation(sweep);
  if (!(target_tpr >= 0.0 && target_tpr <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "target TPR must be in [0, 1]");
  }
  for (const RocPoint& p : RocPoints(sweep)) {
    if (p.tpr >= target_tpr) return p.fpr;
  }
  return 1.0;
}

double Aupr(const RankSweep& sweep) {
  RequirePositives(sweep);
  return AveragePrecision(sweep.steps(), sweep.total_positive());
}

std::vector<RocPoint> RocPoints(const ScoredPopulation& population) {
  return RocPoints(RankSweep(population));
}
double Auroc(const ScoredPopulation& population) {
  return Auroc(RankSweep(population));
}
double FprAtTpr(const ScoredPopulation& population, double target_tpr) {
  return FprAtTpr(RankSweep(population), target_tpr);
}
double Aupr(const ScoredPopulation& population) {
  return Aupr(RankSweep(population));
}

std::optional<double> MapDelta(std::span<const MatchRecord> records,
                               std::span<const MissedInstance> missed,
                               SizeThreshold delta, MapPopulation mode) {
  ScoredPopulation population;
  for (const MatchRecord& r : records) {
    if (!delta.Keeps(r.detection_area)) continue;
    population.Add(r.score, r.label == MatchLabel::kOod);
  }
  const RankSweep sweep(population);
  double denominator = sweep.total_positive();
  if (mode == MapPopulation::kWithMissed) {
    denominator += static_cast<double>(
        std::count_if(missed.begin(), missed.end(), [&](const MissedInstance& m) {
          return delta.Keeps(m.area);
        }));
  }
  if (denominator == 0.0) return std::nullopt;
  return AveragePrecision(sweep.steps(), denominator);
}

ScoredPopulation PixelPopulation(const ErrorMap& u, const BinaryMask& truth) {
  CheckSameShape(u, truth, "PixelPopulation");
  ScoredPopulation population;
  auto& scores = population.mutable_scores();
  auto& labels = population.mutable_labels();
  scores.resize(u.size());
  labels.resize(u.size());
  const auto src = u.values();
  const auto truth_values = truth.values();
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  bool non_binary = false;
#pragma omp parallel for schedule(static) reduction(|| : non_binary)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    scores[i] = src[i];
    labels[i] = truth_values[i];
    non_binary = non_binary || truth_values[i] > 1;
  }
  if (non_binary) {
    throw Error(ErrorCode::kInvalidArgument, "truth map must be binary");
  }
  return population;
}

ScoredPopulation CoveredPixelPopulation(const ErrorMap& u,
                                        const BinaryMask& truth,
                                        const InstanceLabelMap& instances) {
  CheckSameShape(u, truth, "CoveredPixelPopulation");
  CheckSameShape(u, instances, "CoveredPixelPopulation");
  ScoredPopulation population;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (truth[i] > 1) {
      throw Error(ErrorCode::kInvalidArgument, "truth map must be binary");
    }
    if (instances[i] != 0) population.Add(u[i], truth[i] == 1);
  }
  return population;
}

std::size_t ScoreHistogram::Total() const {
  return std::accumulate(ood.begin(), ood.end(), std::size_t{0}) +
         std::accumulate(in_dist.begin(), in_dist.end(), std::size_t{0}) +
         std::accumulate(unmatched.begin(), unmatched.end(), std::size_t{0});
}

std::size_t HistogramBin(double score, std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "bins must be >= 1");
  if (!(score > 0.0)) return 0;
  if (score >= 1.0) return bins - 1;
  const double n = static_cast<double>(bins);
  auto bin = static_cast<std::size_t>(std::floor(score * n));
  // Snap to the edges k / bins exactly as BinLow / BinHigh report them.
  while (bin > 0 && score < static_cast<double>(bin) / n) --bin;
  while (bin + 1 < bins && score >= static_cast<double>(bin + 1) / n) ++bin;
  return std::min(bin, bins - 1);
}

ScoreHistogram BuildScoreHistogram(std::span<const MatchRecord> records,
                                   std::size_t bins) {
  if (bins == 0) throw Error(ErrorCode::kInvalidArgument, "bins must be >= 1");
  ScoreHistogram hist;
  hist.bins = bins;
  hist.ood.assign(bins, 0);
  hist.in_dist.assign(bins, 0);
  hist.unmatched.assign(bins, 0);
  for (const MatchRecord& r : records) {
    const std::size_t k = HistogramBin(r.score, bins);
    switch (r.label) {
      case MatchLabel::kOod: ++hist.ood[k]; break;
      case MatchLabel::kInDist: ++hist.in_dist[k]; break;
      case MatchLabel::kUnmatched: ++hist.unmatched[k]; break;
    }
  }
  return hist;
}

}  // namespace iaood
