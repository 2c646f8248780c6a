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

#ifndef IAOOD_SERIAL_H_
#define IAOOD_SERIAL_H_

#include <span>
#include <vector>

#include "iaood/grid.h"
#include "iaood/instances.h"
#include "iaood/metrics.h"

// Straight-line single-threaded versions of the OpenMP kernels. They are the
// reference the parallel kernels are tested and benchmarked against.
namespace iaood::serial {

ErrorMap McpScore(const SoftmaxStack& softmax);
ErrorMap MeanSoftmaxEntropy(std::span<const SoftmaxStack> samples);
ErrorMap FilterErrorMap(const ErrorMap& u, const InstanceLabelMap& instances);
std::vector<ScoredInstance> AggregateInstanceScores(
    const ErrorMap& u, const InstanceLabelMap& instances);
ScoredPopulation PixelPopulation(const ErrorMap& u, const BinaryMask& truth);

}  // namespace iaood::serial

#endif  // IAOOD_SERIAL_H_
