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

#include "iaood/matching.h"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace iaood {
namespace {

constexpr std::size_t kIdSpace = std::size_t{1} << 16;

}  // namespace

double MaskIou(const BinaryMask& a, const BinaryMask& b) {
  CheckSameShape(a, b, "MaskIou");
  std::size_t intersection = 0;
  std::size_t union_count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool in_a = a[i] != 0;
    const bool in_b = b[i] != 0;
    intersection += in_a && in_b;
    union_count += in_a || in_b;
  }
  if (union_count == 0) return 0.0;
  return static_cast<double>(intersection) / static_cast<double>(union_count);
}

std::vector<Assignment> GreedyAssign(std::vector<IouCandidate> candidates,
                                     double iou_threshold) {
  std::erase_if(candidates, [iou_threshold](const IouCandidate& c) {
    return !(c.iou > iou_threshold);
  });
  std::sort(candidates.begin(), candidates.end(),
            [](const IouCandidate& a, const IouCandidate& b) {
              if (a.iou != b.iou) return a.iou > b.iou;
              if (a.detection_id != b.detection_id) {
                return a.detection_id < b.detection_id;
              }
              return a.gt_id < b.gt_id;
            });
  std::unordered_set<std::uint16_t> det_used;
  std::unordered_set<std::uint16_t> gt_used;
  std::vector<Assignment> picks;
  for (const IouCandidate& c : candidates) {
    if (det_used.contains(c.detection_id) || gt_used.contains(c.gt_id)) continue;
    det_used.insert(c.detection_id);
    gt_used.insert(c.gt_id);
    picks.push_back({c.detection_id, c.gt_id, c.iou});
  }
  return picks;
}

MatchResult MatchInstances(std::span<const ScoredInstance> detections,
                           const InstanceLabelMap& detection_map,
                           const InstanceLabelMap& gt,
                           const SemanticLabelMap& semantic,
                           const std::set<std::uint8_t>& ood_classes,
                           double iou_threshold) {
  CheckSameShape(detection_map, gt, "MatchInstances detections vs gt");
  CheckSameShape(detection_map, semantic, "MatchInstances detections vs semantic");

  std::vector<std::uint8_t> listed(kIdSpace, 0);
  for (const ScoredInstance& d : detections) {
    if (d.id == 0 || listed[d.id]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "detection ids must be nonzero and unique");
    }
    listed[d.id] = 1;
  }

  std::vector<std::size_t> det_area(kIdSpace, 0);
  std::vector<std::size_t> gt_area(kIdSpace, 0);
  std::vector<std::uint8_t> gt_class(kIdSpace, 0);
  std::unordered_map<std::uint32_t, std::size_t> intersections;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const std::uint16_t d = detection_map[i];
    const std::uint16_t g = gt[i];
    if (g != 0 && gt_area[g]++ == 0) gt_class[g] = semantic[i];
    if (d == 0 || !listed[d]) continue;
    ++det_area[d];
    if (g != 0) ++intersections[(std::uint32_t{d} << 16) | g];
  }

  std::vector<double> best_rejected(kIdSpace, 0.0);
  std::vector<IouCandidate> candidates;
  for (const auto& [key, inter] : intersections) {
    const auto d = static_cast<std::uint16_t>(key >> 16);
    const auto g = static_cast<std::uint16_t>(key & 0xffff);
    const double iou = static_cast<double>(inter) /
                       static_cast<double>(det_area[d] + gt_area[g] - inter);
    if (iou > iou_threshold) {
      candidates.push_back({d, g, iou});
    } else {
      best_rejected[d] = std::max(best_rejected[d], iou);
    }
  }

  std::vector<std::uint16_t> det_match(kIdSpace, 0);
  std::vector<double> det_iou(kIdSpace, 0.0);
  std::vector<std::uint8_t> gt_used(kIdSpace, 0);
  for (const Assignment& a :
       GreedyAssign(std::move(candidates), iou_threshold)) {
    det_match[a.detection_id] = a.gt_id;
    det_iou[a.detection_id] = a.iou;
    gt_used[a.gt_id] = 1;
  }

  MatchResult result;
  std::vector<ScoredInstance> ordered(detections.begin(), detections.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const ScoredInstance& a, const ScoredInstance& b) {
              return a.id < b.id;
            });
  result.records.reserve(ordered.size());
  for (const ScoredInstance& d : ordered) {
    if (det_area[d.id] == 0) {
      throw Error(ErrorCode::kUnknownInstanceId,
                  "detection " + std::to_string(d.id) +
                      " has no pixels in the detection map");
    }
    MatchRecord record;
    record.detection_id = d.id;
    record.detection_area = det_area[d.id];
    record.score = d.score;
    if (const std::uint16_t g = det_match[d.id]; g != 0) {
      record.gt_id = g;
      record.iou = det_iou[d.id];
      record.label = ood_classes.contains(gt_class[g]) ? MatchLabel::kOod
                                                       : MatchLabel::kInDist;
    } else {
      record.iou = best_rejected[d.id];
      record.label = MatchLabel::kUnmatched;
    }
    result.records.push_back(record);
  }
  for (std::size_t g = 1; g < kIdSpace; ++g) {
    if (gt_area[g] == 0 || gt_used[g]) continue;
    if (ood_classes.contains(gt_class[g])) {
      result.missed.push_back({static_cast<std::uint16_t>(g), gt_area[g]});
    }
  }
  return result;
}

}  // namespace iaood
