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

#ifndef IAOOD_SYNTH_H_
#define IAOOD_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

#include "iaood/grid.h"
#include "iaood/instances.h"

namespace iaood {

enum class Shape : std::uint8_t { kRectangle, kEllipse, kLShape };

// Class layout of a synthetic scene with C classes and S stuff classes:
//   0 .. S-1      stuff, painted as horizontal background strips
//   S .. C-2      in-distribution things
//   C-1           the OOD class
struct SceneSpec {
  std::size_t height = 256;
  std::size_t width = 256;
  std::size_t n_objects = 6;
  double ood_fraction = 0.34;
  std::vector<Shape> shapes = {Shape::kRectangle, Shape::kEllipse,
                               Shape::kLShape};
  std::size_t classes = 6;
  std::size_t stuff_classes = 2;
  std::size_t min_side = 24;
  std::size_t max_side = 80;
  std::uint64_t seed = 0;
};

struct NoiseSpec {
  double boundary_noise = 0.0;
  double background_noise = 0.0;
  double ood_signal = 1.0;
  double in_dist_signal = 0.0;
  double sigma = 0.0;  // spread of the object-pixel Gaussians
};

struct CorruptionSpec {
  std::size_t erosion = 0;
  std::size_t dilation = 0;
  double drop_probability = 0.0;
  // Overrides drop_probability for instances of OOD objects when >= 0.
  double ood_drop_probability = -1.0;
};

struct Scene {
  SemanticLabelMap semantic;
  InstanceLabelMap gt_instances;  // raster-order ids
  std::set<std::uint8_t> ood_classes;
  std::set<std::uint8_t> stuff_classes;
};

// Number of OOD objects for a spec: n_objects * ood_fraction rounded half
// away from zero.
std::size_t OodObjectCount(const SceneSpec& spec);

// Throws kPlacementOverflow when an object cannot be placed clear of the
// others within 1000 attempts, kInvalidArgument on an inconsistent spec.
Scene GenerateScene(const SceneSpec& spec);

// Reach of the boundary nuisance on each side of a class boundary.
inline constexpr std::size_t kBoundaryBandRadius = 2;

// Pixels with a different class within Chebyshev distance radius.
BinaryMask BoundaryBand(const SemanticLabelMap& semantic, std::size_t radius);

ErrorMap GenerateErrorMap(const Scene& scene, const NoiseSpec& noise,
                          std::uint64_t seed);

// Square structuring element of side 2r + 1; outside the grid counts as 0.
BinaryMask ErodeMask(const BinaryMask& mask, std::size_t radius);
BinaryMask DilateMask(const BinaryMask& mask, std::size_t radius);

// Each instance is dropped with its drop probability, otherwise eroded then
// dilated. Grown masks never overwrite a lower-id instance. Output ids are
// dense in raster order.
InstanceLabelMap CorruptMasks(const InstanceLabelMap& gt_instances,
                              const CorruptionSpec& corruption,
                              const std::set<std::uint16_t>& ood_instance_ids,
                              std::uint64_t seed);

// Instance ids of gt_instances whose class is in ood_classes.
std::set<std::uint16_t> OodInstanceIds(const Scene& scene);

// T class-probability volumes over the C-1 in-distribution classes whose
// confidence tracks the error map, with per-sample jitter.
std::vector<SoftmaxStack> GenerateSoftmaxSamples(const Scene& scene,
                                                 const ErrorMap& error,
                                                 std::size_t samples,
                                                 std::uint64_t seed,
                                                 double jitter = 0.05);

}  // namespace iaood

#endif  // IAOOD_SYNTH_H_
