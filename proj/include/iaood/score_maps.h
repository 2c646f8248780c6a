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

#ifndef IAOOD_SCORE_MAPS_H_
#define IAOOD_SCORE_MAPS_H_

#include <span>

#include "iaood/grid.h"

namespace iaood {

// Pixel-wise error maps from class-probability volumes, and detector-mask
// filtering of an existing map. All three are OpenMP data-parallel over
// pixels; iaood::serial holds the single-threaded reference versions.

// Throws kInvalidDistribution unless every pixel's channels are >= 0 and sum
// to 1 within 1e-4.
void CheckDistribution(const SoftmaxStack& softmax);

// 1 - max_c p[c] per pixel.
ErrorMap McpScore(const SoftmaxStack& softmax);

// Entropy (natural log) of the per-pixel mean over T stacks; 0 ln 0 := 0.
// Values lie in [0, ln C] and are not rescaled.
ErrorMap MeanSoftmaxEntropy(std::span<const SoftmaxStack> samples);

// Keeps u where a detector instance covers the pixel, 0 elsewhere.
ErrorMap FilterErrorMap(const ErrorMap& u, const InstanceLabelMap& instances);

}  // namespace iaood

#endif  // IAOOD_SCORE_MAPS_H_
