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

#include "iaood/synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "iaood/rng.h"

namespace iaood {
namespace {

constexpr int kPlacementAttempts = 1000;

struct Placement {
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  Shape shape = Shape::kRectangle;

  // True when the boxes touch or overlap, including diagonally.
  bool Touches(const Placement& o) const {
    return top <= o.top + o.height && o.top <= top + height &&
           left <= o.left + o.width && o.left <= left + width;
  }
};

bool Covers(const Placement& p, std::size_t dy, std::size_t dx) {
  switch (p.shape) {
    case Shape::kRectangle:
      return true;
    case Shape::kEllipse: {
      const double cy = (static_cast<double>(p.height) - 1.0) / 2.0;
      const double cx = (static_cast<double>(p.width) - 1.0) / 2.0;
      const double ny = (static_cast<double>(dy) - cy) / (p.height / 2.0);
      const double nx = (static_cast<double>(dx) - cx) / (p.width / 2.0);
      return ny * ny + nx * nx <= 1.0;
    }
    case Shape::kLShape:
      return dy >= p.height / 2 || dx < p.width / 2;
  }
  return false;
}

// Separable box min (erode) or max (dilate) along one axis.
BinaryMask BoxPass(const BinaryMask& in, std::size_t radius, bool along_rows,
                   bool erode) {
  const std::size_t h = in.height();
  const std::size_t w = in.width();
  const std::size_t lines = along_rows ? h : w;
  const std::size_t len = along_rows ? w : h;
  BinaryMask out(h, w);
  std::vector<std::size_t> prefix(len + 1);
  for (std::size_t line = 0; line < lines; ++line) {
    auto idx = [&](std::size_t k) {
      return along_rows ? line * w + k : k * w + line;
    };
    prefix[0] = 0;
    for (std::size_t k = 0; k < len; ++k) {
      prefix[k + 1] = prefix[k] + (in[idx(k)] != 0);
    }
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t lo = k >= radius ? k - radius : 0;
      const std::size_t hi = std::min(len, k + radius + 1);
      const std::size_t ones = prefix[hi] - prefix[lo];
      if (erode) {
        // Window must lie inside the grid and be all ones.
        out[idx(k)] = (k >= radius && k + radius < len &&
                       ones == 2 * radius + 1);
      } else {
        out[idx(k)] = ones > 0;
      }
    }
  }
  return out;
}

}  // namespace

std::size_t OodObjectCount(const SceneSpec& spec) {
  return static_cast<std::size_t>(
      std::llround(static_cast<double>(spec.n_objects) * spec.ood_fraction));
}

Scene GenerateScene(const SceneSpec& spec) {
  if (spec.height == 0 || spec.width == 0) {
    throw Error(ErrorCode::kInvalidArgument, "scene dims must be >= 1");
  }
  if (spec.stuff_classes == 0 || spec.classes < spec.stuff_classes + 2 ||
      spec.classes > 256) {
    throw Error(ErrorCode::kInvalidArgument,
                "need 1 <= stuff classes and stuff + 2 <= classes <= 256");
  }
  if (!(spec.ood_fraction >= 0.0 && spec.ood_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ood_fraction must be in [0, 1]");
  }
  if (spec.min_side == 0 || spec.min_side > spec.max_side) {
    throw Error(ErrorCode::kInvalidArgument, "need 1 <= min_side <= max_side");
  }
  if (spec.shapes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "shape palette is empty");
  }
  if (spec.n_objects >= 0xffff) {
    throw Error(ErrorCode::kTooManyInstances, "too many objects");
  }

  SplitMix64 rng(spec.seed);
  Scene scene;
  scene.semantic = SemanticLabelMap(spec.height, spec.width);
  scene.gt_instances = InstanceLabelMap(spec.height, spec.width);
  for (std::size_t c = 0; c < spec.stuff_classes; ++c) {
    scene.stuff_classes.insert(static_cast<std::uint8_t>(c));
  }
  const auto ood_class = static_cast<std::uint8_t>(spec.classes - 1);
  scene.ood_classes.insert(ood_class);

  // Background: stuff strips separated by cut rows.
  std::vector<std::size_t> cuts;
  for (std::size_t s = 1; s < spec.stuff_classes; ++s) {
    cuts.push_back(spec.height > 1
                       ? static_cast<std::size_t>(rng.Between(
                             1, static_cast<std::int64_t>(spec.height) - 1))
                       : 0);
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t h = 0; h < spec.height; ++h) {
    const auto strip = static_cast<std::uint8_t>(
        std::upper_bound(cuts.begin(), cuts.end(), h) - cuts.begin());
    for (std::size_t w = 0; w < spec.width; ++w) scene.semantic.at(h, w) = strip;
  }

  const std::size_t max_h = std::min(spec.max_side, spec.height);
  const std::size_t max_w = std::min(spec.max_side, spec.width);
  const std::size_t min_h = std::min(spec.min_side, max_h);
  const std::size_t min_w = std::min(spec.min_side, max_w);
  std::vector<Placement> placed;
  for (std::size_t k = 0; k < spec.n_objects; ++k) {
    bool ok = false;
    Placement p;
    for (int attempt = 0; attempt < kPlacementAttempts && !ok; ++attempt) {
      p.height = static_cast<std::size_t>(rng.Between(
          static_cast<std::int64_t>(min_h), static_cast<std::int64_t>(max_h)));
      p.width = static_cast<std::size_t>(rng.Between(
          static_cast<std::int64_t>(min_w), static_cast<std::int64_t>(max_w)));
      p.shape = spec.shapes[rng.Below(spec.shapes.size())];
      p.top = rng.Below(spec.height - p.height + 1);
      p.left = rng.Below(spec.width - p.width + 1);
      ok = std::none_of(placed.begin(), placed.end(),
                        [&](const Placement& q) { return p.Touches(q); });
    }
    if (!ok) {
      throw Error(ErrorCode::kPlacementOverflow,
                  "object " + std::to_string(k) + " of " +
                      std::to_string(spec.n_objects) + " does not fit");
    }
    placed.push_back(p);
  }

  // Partial Fisher-Yates: the first n_ood slots of order become OOD.
  const std::size_t n_ood = OodObjectCount(spec);
  std::vector<std::size_t> order(spec.n_objects);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < n_ood; ++i) {
    const std::size_t j = i + rng.Below(spec.n_objects - i);
    std::swap(order[i], order[j]);
  }
  std::vector<std::uint8_t> object_class(spec.n_objects);
  for (std::size_t i = 0; i < spec.n_objects; ++i) {
    object_class[order[i]] =
        i < n_ood ? ood_class
                  : static_cast<std::uint8_t>(
                        spec.stuff_classes +
                        rng.Below(spec.classes - spec.stuff_classes - 1));
  }

  for (std::size_t k = 0; k < placed.size(); ++k) {
    const Placement& p = placed[k];
    for (std::size_t dy = 0; dy < p.height; ++dy) {
      for (std::size_t dx = 0; dx < p.width; ++dx) {
        if (!Covers(p, dy, dx)) continue;
        scene.semantic.at(p.top + dy, p.left + dx) = object_class[k];
        scene.gt_instances.at(p.top + dy, p.left + dx) =
            static_cast<std::uint16_t>(k + 1);
      }
    }
  }
  scene.gt_instances = RelabelRasterOrder(scene.gt_instances);
  return scene;
}

BinaryMask BoundaryBand(const SemanticLabelMap& semantic, std::size_t radius) {
  const std::size_t h = semantic.height();
  const std::size_t w = semantic.width();
  BinaryMask band(h, w);
  for (std::size_t y = 0; y < h; ++y) {
    const std::size_t y0 = y > radius ? y - radius : 0;
    const std::size_t y1 = std::min(h - 1, y + radius);
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t x0 = x > radius ? x - radius : 0;
      const std::size_t x1 = std::min(w - 1, x + radius);
      const std::uint8_t c = semantic.at(y, x);
      bool edge = false;
      for (std::size_t ny = y0; ny <= y1 && !edge; ++ny) {
        for (std::size_t nx = x0; nx <= x1; ++nx) {
          if (semantic.at(ny, nx) != c) {
            edge = true;
            break;
          }
        }
      }
      band.at(y, x) = edge;
    }
  }
  return band;
}

ErrorMap GenerateErrorMap(const Scene& scene, const NoiseSpec& noise,
                          std::uint64_t seed) {
  for (double a : {noise.boundary_noise, noise.background_noise,
                   noise.ood_signal, noise.in_dist_signal}) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "noise amplitudes and signal levels must be in [0, 1]");
    }
  }
  if (!(noise.sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  }
  const SemanticLabelMap& semantic = scene.semantic;
  const BinaryMask band = BoundaryBand(semantic, kBoundaryBandRadius);
  std::array<std::uint8_t, 256> kind{};  // 0 stuff, 1 in-dist thing, 2 OOD
  kind.fill(1);
  for (std::uint8_t c : scene.stuff_classes) kind[c] = 0;
  for (std::uint8_t c : scene.ood_classes) kind[c] = 2;

  SplitMix64 rng(seed);
  ErrorMap u(semantic.height(), semantic.width());
  for (std::size_t i = 0; i < semantic.size(); ++i) {
    double value = 0.0;
    switch (kind[semantic[i]]) {
      case 0: value = noise.background_noise * rng.Uniform(); break;
      case 1: value = rng.Gaussian(noise.in_dist_signal, noise.sigma); break;
      case 2: value = rng.Gaussian(noise.ood_signal, noise.sigma); break;
    }
    if (band[i]) value += noise.boundary_noise * rng.Uniform();
    u[i] = static_cast<float>(std::clamp(value, 0.0, 1.0));
  }
  return u;
}

BinaryMask ErodeMask(const BinaryMask& mask, std::size_t radius) {
  if (radius == 0) return mask;
  return BoxPass(BoxPass(mask, radius, true, true), radius, false, true);
}

BinaryMask DilateMask(const BinaryMask& mask, std::size_t radius) {
  if (radius == 0) return mask;
  return BoxPass(BoxPass(mask, radius, true, false), radius, false, false);
}

InstanceLabelMap CorruptMasks(const InstanceLabelMap& gt_instances,
                              const CorruptionSpec& corruption,
                              const std::set<std::uint16_t>& ood_instance_ids,
                              std::uint64_t seed) {
  auto valid_probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!valid_probability(corruption.drop_probability) ||
      !(corruption.ood_drop_probability < 0.0 ||
        valid_probability(corruption.ood_drop_probability))) {
    throw Error(ErrorCode::kInvalidArgument, "drop probability not in [0, 1]");
  }
  const std::vector<ScoredInstance> instances =
      AggregateInstanceScores(ErrorMap(gt_instances.height(), gt_instances.width()),
                              gt_instances);
  const std::size_t height = gt_instances.height();
  const std::size_t width = gt_instances.width();
  const std::size_t margin = corruption.dilation + 1;

  SplitMix64 rng(seed);
  InstanceLabelMap out(height, width);
  for (const ScoredInstance& inst : instances) {
    const double p = ood_instance_ids.contains(inst.id) &&
                             corruption.ood_drop_probability >= 0.0
                         ? corruption.ood_drop_probability
                         : corruption.drop_probability;
    if (rng.Uniform() < p) continue;

    // Work in the instance's bounding box grown by the dilation reach.
    const std::size_t top = inst.bbox.min_h >= margin ? inst.bbox.min_h - margin : 0;
    const std::size_t left = inst.bbox.min_w >= margin ? inst.bbox.min_w - margin : 0;
    const std::size_t bottom = std::min(height, inst.bbox.max_h + margin + 1);
    const std::size_t right = std::min(width, inst.bbox.max_w + margin + 1);
    BinaryMask roi(bottom - top, right - left);
    for (std::size_t y = top; y < bottom; ++y) {
      for (std::size_t x = left; x < right; ++x) {
        roi.at(y - top, x - left) = gt_instances.at(y, x) == inst.id;
      }
    }
    // The roi edge only coincides with the grid edge where it was clipped,
    // and the mask never reaches the unclipped edges, so eroding with a
    // zero exterior matches eroding on the full grid.
    roi = DilateMask(ErodeMask(roi, corruption.erosion), corruption.dilation);
    for (std::size_t y = top; y < bottom; ++y) {
      for (std::size_t x = left; x < right; ++x) {
        if (roi.at(y - top, x - left) && out.at(y, x) == 0) {
          out.at(y, x) = inst.id;
        }
      }
    }
  }
  return RelabelRasterOrder(out);
}

std::set<std::uint16_t> OodInstanceIds(const Scene& scene) {
  std::set<std::uint16_t> ids;
  for (std::size_t i = 0; i < scene.gt_instances.size(); ++i) {
    const std::uint16_t id = scene.gt_instances[i];
    if (id != 0 && scene.ood_classes.contains(scene.semantic[i])) ids.insert(id);
  }
  return ids;
}

std::vector<SoftmaxStack> GenerateSoftmaxSamples(const Scene& scene,
                                                 const ErrorMap& error,
                                                 std::size_t samples,
                                                 std::uint64_t seed,
                                                 double jitter) {
  CheckSameShape(scene.semantic, error, "GenerateSoftmaxSamples");
  const std::uint8_t max_class =
      *std::max_element(scene.ood_classes.begin(), scene.ood_classes.end());
  const std::size_t channels = max_class;  // every class below the OOD class
  if (channels < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two known classes");
  }
  const std::size_t n = error.size();
  SplitMix64 rng(seed);

  // The class the segmenter predicts; OOD pixels get a random known class.
  std::vector<std::uint8_t> predicted(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t c = scene.semantic[i];
    predicted[i] = scene.ood_classes.contains(c) || c >= channels
                       ? static_cast<std::uint8_t>(rng.Below(channels))
                       : c;
  }

  const double k = static_cast<double>(channels);
  std::vector<SoftmaxStack> out;
  out.reserve(samples);
  for (std::size_t t = 0; t < samples; ++t) {
    SoftmaxStack stack(channels, error.height(), error.width());
    auto values = stack.values();
    for (std::size_t i = 0; i < n; ++i) {
      const double u =
          std::clamp(double{error[i]} + rng.Gaussian(0.0, jitter), 0.0, 1.0);
      const auto other = static_cast<float>(u / k);
      const auto top = static_cast<float>(1.0 - u * (1.0 - 1.0 / k));
      for (std::size_t c = 0; c < channels; ++c) {
        values[c * n + i] = c == predicted[i] ? top : other;
      }
    }
    out.push_back(std::move(stack));
  }
  return out;
}

}  // namespace iaood
