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

#ifndef IAOOD_METRICS_H_
#define IAOOD_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "iaood/grid.h"
#include "iaood/instances.h"
#include "iaood/matching.h"

namespace iaood {

// Scores with binary labels (positive = OOD) and optional weights. An empty
// weight vector means every entry weighs 1.
class ScoredPopulation {
 public:
  void Reserve(std::size_t n);
  void Add(double score, bool positive);
  void Add(double score, bool positive, double weight);
  // Concatenation; weights are materialised only if either side has them.
  void Append(const ScoredPopulation& other);

  std::size_t size() const { return scores_.size(); }
  bool empty() const { return scores_.empty(); }
  std::span<const double> scores() const { return scores_; }
  std::span<const std::uint8_t> labels() const { return labels_; }
  bool weighted() const { return weighted_; }
  double weight(std::size_t i) const { return weighted_ ? weights_[i] : 1.0; }

  double PositiveWeight() const;
  double NegativeWeight() const;

  // Direct access for bulk fills of unweighted populations.
  std::vector<double>& mutable_scores() { return scores_; }
  std::vector<std::uint8_t>& mutable_labels() { return labels_; }

 private:
  std::vector<double> scores_;
  std::vector<std::uint8_t> labels_;
  std::vector<double> weights_;
  bool weighted_ = false;

  void MaterialiseWeights();
};

// Cumulative (weighted) true/false positives after including every entry
// with score >= threshold. One step per distinct score, descending.
struct SweepStep {
  double threshold = 0.0;
  double tp = 0.0;
  double fp = 0.0;
};

// The descending-score sweep every ranking metric is read from. Build it
// once (O(n log n)) when several metrics share a population.
class RankSweep {
 public:
  explicit RankSweep(const ScoredPopulation& population);

  double total_positive() const { return total_positive_; }
  double total_negative() const { return total_negative_; }
  std::span<const SweepStep> steps() const { return steps_; }

 private:
  double total_positive_ = 0.0;
  double total_negative_ = 0.0;
  std::vector<SweepStep> steps_;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // +inf for the (0, 0) origin
};

// All of these throw kDegeneratePopulation when a required class is absent:
// ROC-family metrics need a positive and a negative, Aupr only a positive.
std::vector<RocPoint> RocPoints(const RankSweep& sweep);
double Auroc(const RankSweep& sweep);
double FprAtTpr(const RankSweep& sweep, double target_tpr = 0.95);
double Aupr(const RankSweep& sweep);

std::vector<RocPoint> RocPoints(const ScoredPopulation& population);
double Auroc(const ScoredPopulation& population);
double FprAtTpr(const ScoredPopulation& population, double target_tpr = 0.95);
double Aupr(const ScoredPopulation& population);

enum class MapPopulation { kWithMissed, kDetectedOnly };

// Average precision over size-filtered detections (positives: OOD records;
// negatives: IN_DIST and UNMATCHED). With kWithMissed the recall denominator
// also counts missed GT OOD objects whose area survives the filter. nullopt
// when the denominator is zero.
std::optional<double> MapDelta(std::span<const MatchRecord> records,
                               std::span<const MissedInstance> missed,
                               SizeThreshold delta,
                               MapPopulation mode = MapPopulation::kWithMissed);

// One entry per pixel; positive iff truth is 1. Truth must be {0, 1}.
ScoredPopulation PixelPopulation(const ErrorMap& u, const BinaryMask& truth);
// Same, restricted to pixels covered by a detector instance.
ScoredPopulation CoveredPixelPopulation(const ErrorMap& u,
                                        const BinaryMask& truth,
                                        const InstanceLabelMap& instances);

// Uniform bins over [0, 1]; left-inclusive, last bin right-inclusive. Scores
// outside [0, 1] land in the first or last bin.
struct ScoreHistogram {
  std::size_t bins = 0;
  std::vector<std::size_t> ood;
  std::vector<std::size_t> in_dist;
  std::vector<std::size_t> unmatched;

  double BinLow(std::size_t k) const {
    return static_cast<double>(k) / static_cast<double>(bins);
  }
  double BinHigh(std::size_t k) const {
    return static_cast<double>(k + 1) / static_cast<double>(bins);
  }
  std::size_t Total() const;
};

std::size_t HistogramBin(double score, std::size_t bins);
ScoreHistogram BuildScoreHistogram(std::span<const MatchRecord> records,
                                   std::size_t bins = 20);

}  // namespace iaood

#endif  // IAOOD_METRICS_H_
