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

#ifndef IAOOD_MATCHING_H_
#define IAOOD_MATCHING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "iaood/grid.h"
#include "iaood/instances.h"

namespace iaood {

inline constexpr double kDefaultIouThreshold = 0.5;

enum class MatchLabel : std::uint8_t { kOod, kInDist, kUnmatched };

struct MatchRecord {
  std::uint16_t detection_id = 0;
  std::optional<std::uint16_t> gt_id;
  // For unmatched detections: the best overlap that did not qualify.
  double iou = 0.0;
  MatchLabel label = MatchLabel::kUnmatched;
  std::size_t detection_area = 0;
  double score = 0.0;

  bool operator==(const MatchRecord&) const = default;
};

// A ground-truth OOD instance no detection matched.
struct MissedInstance {
  std::uint16_t gt_id = 0;
  std::size_t area = 0;

  bool operator==(const MissedInstance&) const = default;
};

struct MatchResult {
  std::vector<MatchRecord> records;  // ascending detection_id
  std::vector<MissedInstance> missed;  // ascending gt_id
};

// |a & b| / |a | b| over nonzero pixels; 0 when both are empty.
double MaskIou(const BinaryMask& a, const BinaryMask& b);

struct IouCandidate {
  std::uint16_t detection_id = 0;
  std::uint16_t gt_id = 0;
  double iou = 0.0;
};

struct Assignment {
  std::uint16_t detection_id = 0;
  std::uint16_t gt_id = 0;
  double iou = 0.0;

  bool operator==(const Assignment&) const = default;
};

// Greedy one-to-one assignment over an IoU table. Only pairs with
// iou > threshold are eligible; they are taken in descending IoU, ties broken
// by smaller detection id, then smaller gt id. Output is in pick order.
std::vector<Assignment> GreedyAssign(std::vector<IouCandidate> candidates,
                                     double iou_threshold);

// Greedy one-to-one assignment: all (detection, gt) pairs with
// IoU > iou_threshold are taken in descending IoU order (ties: smaller
// detection id, then smaller gt id) whenever both ends are still free.
// Only the ids listed in detections take part; their masks come from
// detection_map. gt must be GtDetector output on semantic so that each GT
// instance has one class.
MatchResult MatchInstances(std::span<const ScoredInstance> detections,
                           const InstanceLabelMap& detection_map,
                           const InstanceLabelMap& gt,
                           const SemanticLabelMap& semantic,
                           const std::set<std::uint8_t>& ood_classes,
                           double iou_threshold = kDefaultIouThreshold);

}  // namespace iaood

#endif  // IAOOD_MATCHING_H_
