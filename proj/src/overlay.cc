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

#include "iaood/overlay.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "iaood/tensor_io.h"

namespace iaood {
namespace {

enum class Tint : std::uint8_t { kNone, kRed, kGreen };

std::uint8_t Blend(std::uint8_t base, std::uint8_t tint) {
  return static_cast<std::uint8_t>((unsigned{base} + unsigned{tint}) / 2);
}

RgbImage Compose(const Grid<std::uint8_t>& gray,
                 const InstanceLabelMap& instances,
                 std::span<const ScoredInstance> scores) {
  CheckSameShape(gray, instances, "overlay");
  std::vector<Tint> tints(std::size_t{1} << 16, Tint::kNone);
  std::vector<std::uint8_t> present(std::size_t{1} << 16, 0);
  for (std::uint16_t id : instances.values()) present[id] = 1;
  for (const ScoredInstance& s : scores) {
    if (s.id == 0 || !present[s.id]) {
      throw Error(ErrorCode::kUnknownInstanceId,
                  "instance " + std::to_string(s.id) +
                      " is not in the label map");
    }
    tints[s.id] = s.score > kOverlayScoreThreshold ? Tint::kRed : Tint::kGreen;
  }
  RgbImage image(gray.height(), gray.width());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const std::uint8_t g = gray[i];
    switch (tints[instances[i]]) {
      case Tint::kNone: image[i] = {g, g, g}; break;
      case Tint::kRed: image[i] = {Blend(g, 255), Blend(g, 0), Blend(g, 0)}; break;
      case Tint::kGreen: image[i] = {Blend(g, 0), Blend(g, 255), Blend(g, 0)}; break;
    }
  }
  return image;
}

}  // namespace

RgbImage RenderOverlay(const ErrorMap& base, const InstanceLabelMap& instances,
                       std::span<const ScoredInstance> scores) {
  Grid<std::uint8_t> gray(base.height(), base.width());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const float v = base[i];
    const double clamped = std::isnan(v) ? 0.0 : std::clamp(double{v}, 0.0, 1.0);
    gray[i] = static_cast<std::uint8_t>(std::lround(clamped * 255.0));
  }
  return Compose(gray, instances, scores);
}

RgbImage RenderOverlay(const SemanticLabelMap& base,
                       const InstanceLabelMap& instances,
                       std::span<const ScoredInstance> scores) {
  // Class ids are spread over the gray range so neighbouring classes differ.
  const std::uint8_t max_class =
      base.empty() ? 0 : *std::max_element(base.values().begin(), base.values().end());
  const unsigned step = 255u / std::max<unsigned>(1u, max_class);
  Grid<std::uint8_t> gray(base.height(), base.width());
  for (std::size_t i = 0; i < base.size(); ++i) {
    gray[i] = static_cast<std::uint8_t>(base[i] * step);
  }
  return Compose(gray, instances, scores);
}

std::vector<std::uint8_t> EncodePpm(const RgbImage& image) {
  const std::string header = "P6 " + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + " 255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + 3 * image.size());
  for (const Rgb& px : image.values()) {
    out.push_back(px.r);
    out.push_back(px.g);
    out.push_back(px.b);
  }
  return out;
}

void WriteOverlay(const ErrorMap& base, const InstanceLabelMap& instances,
                  std::span<const ScoredInstance> scores,
                  const std::filesystem::path& path) {
  WriteFileBytes(EncodePpm(RenderOverlay(base, instances, scores)), path);
}

void WriteOverlay(const SemanticLabelMap& base,
                  const InstanceLabelMap& instances,
                  std::span<const ScoredInstance> scores,
                  const std::filesystem::path& path) {
  WriteFileBytes(EncodePpm(RenderOverlay(base, instances, scores)), path);
}

}  // namespace iaood
