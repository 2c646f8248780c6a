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

#ifndef IAOOD_OVERLAY_H_
#define IAOOD_OVERLAY_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "iaood/grid.h"
#include "iaood/instances.h"

namespace iaood {

inline constexpr double kOverlayScoreThreshold = 0.5;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

using RgbImage = Grid<Rgb>;

// Grayscale base with scored instances blended 50% toward pure red
// (score > 0.5) or pure green (score <= 0.5). Pixels of instances that are
// not in the score list stay gray.
RgbImage RenderOverlay(const ErrorMap& base, const InstanceLabelMap& instances,
                       std::span<const ScoredInstance> scores);
RgbImage RenderOverlay(const SemanticLabelMap& base,
                       const InstanceLabelMap& instances,
                       std::span<const ScoredInstance> scores);

// Binary P6: "P6 <w> <h> 255\n" followed by RGB triples.
std::vector<std::uint8_t> EncodePpm(const RgbImage& image);

void WriteOverlay(const ErrorMap& base, const InstanceLabelMap& instances,
                  std::span<const ScoredInstance> scores,
                  const std::filesystem::path& path);
void WriteOverlay(const SemanticLabelMap& base,
                  const InstanceLabelMap& instances,
                  std::span<const ScoredInstance> scores,
                  const std::filesystem::path& path);

}  // namespace iaood

#endif  // IAOOD_OVERLAY_H_
