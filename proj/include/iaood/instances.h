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

#ifndef IAOOD_INSTANCES_H_
#define IAOOD_INSTANCES_H_

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "iaood/grid.h"

namespace iaood {

struct BoundingBox {
  std::size_t min_h = 0;
  std::size_t min_w = 0;
  std::size_t max_h = 0;  // inclusive
  std::size_t max_w = 0;  // inclusive

  bool operator==(const BoundingBox&) const = default;
};

struct ScoredInstance {
  std::uint16_t id = 0;
  std::size_t area = 0;
  BoundingBox bbox;
  double score = 0.0;

  bool operator==(const ScoredInstance&) const = default;
};

// Side length delta; instances with area < delta^2 are removed.
class SizeThreshold {
 public:
  static constexpr std::size_t kDefaultDelta = 16;

  constexpr SizeThreshold() = default;
  constexpr explicit SizeThreshold(std::size_t delta) : delta_(delta) {}

  constexpr std::size_t delta() const { return delta_; }
  constexpr std::size_t min_area() const { return delta_ * delta_; }
  constexpr bool Keeps(std::size_t area) const { return area >= min_area(); }

 private:
  std::size_t delta_ = kDefaultDelta;
};

enum class Connectivity { kFour = 4, kEight = 8 };

// Mean of the error map over each instance mask, accumulated in double.
// One entry per distinct nonzero label, ascending id. Rows are processed in
// fixed-size blocks whose partial sums merge in block order, so the result
// does not depend on the OpenMP thread count.
std::vector<ScoredInstance> AggregateInstanceScores(
    const ErrorMap& u, const InstanceLabelMap& instances);

// Keeps instances with area >= delta^2, preserving order.
std::vector<ScoredInstance> SizeFilter(std::span<const ScoredInstance> scored,
                                       SizeThreshold threshold);

// Every connected same-class region becomes one instance; ids 1, 2, ... in
// raster order of each region's first pixel. Pixels whose class is in
// stuff_classes map to background 0.
InstanceLabelMap GtDetector(const SemanticLabelMap& semantic,
                            Connectivity connectivity = Connectivity::kEight,
                            const std::set<std::uint8_t>& stuff_classes = {});

// Renumbers nonzero labels to 1, 2, ... in raster order of first pixel.
InstanceLabelMap RelabelRasterOrder(const InstanceLabelMap& labels);

}  // namespace iaood

#endif  // IAOOD_INSTANCES_H_
