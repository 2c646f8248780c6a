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

#include "iaood/score_maps.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace iaood {

void CheckDistribution(const SoftmaxStack& softmax) {
  if (softmax.classes() == 0) {
    throw Error(ErrorCode::kInvalidDistribution, "softmax has no channels");
  }
  const auto n = static_cast<std::ptrdiff_t>(softmax.plane_size());
  const std::size_t classes = softmax.classes();
  std::ptrdiff_t first_bad = std::numeric_limits<std::ptrdiff_t>::max();
#pragma omp parallel for reduction(min : first_bad)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double sum = 0.0;
    bool negative = false;
    for (std::size_t c = 0; c < classes; ++c) {
      const float p = softmax.channel(c, static_cast<std::size_t>(i));
      negative |= !(p >= 0.0f);
      sum += p;
    }
    if (negative || !(std::abs(sum - 1.0) <= 1e-4)) first_bad = std::min(first_bad, i);
  }
  if (first_bad != std::numeric_limits<std::ptrdiff_t>::max()) {
    throw Error(ErrorCode::kInvalidDistribution,
                "pixel " + std::to_string(first_bad) +
                    " is not a probability vector");
  }
}

ErrorMap McpScore(const SoftmaxStack& softmax) {
  CheckDistribution(softmax);
  ErrorMap out(softmax.height(), softmax.width());
  const auto n = static_cast<std::ptrdiff_t>(softmax.plane_size());
  const std::size_t classes = softmax.classes();
  auto values = out.values();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto px = static_cast<std::size_t>(i);
    float best = softmax.channel(0, px);
    for (std::size_t c = 1; c < classes; ++c) {
      best = std::max(best, softmax.channel(c, px));
    }
    values[px] = 1.0f - best;
  }
  return out;
}

ErrorMap MeanSoftmaxEntropy(std::span<const SoftmaxStack> samples) {
  if (samples.empty()) {
    throw Error(ErrorCode::kEmptySampleList, "need at least one sample");
  }
  const SoftmaxStack& first = samples.front();
  for (const SoftmaxStack& s : samples) {
    if (s.classes() != first.classes() || s.height() != first.height() ||
        s.width() != first.width()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "softmax samples disagree on C x H x W");
    }
    CheckDistribution(s);
  }
  ErrorMap out(first.height(), first.width());
  const auto n = static_cast<std::ptrdiff_t>(first.plane_size());
  const std::size_t classes = first.classes();
  const auto t = static_cast<double>(samples.size());
  auto values = out.values();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto px = static_cast<std::size_t>(i);
    double entropy = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      double mean = 0.0;
      for (const SoftmaxStack& s : samples) mean += s.channel(c, px);
      mean = std::max(mean / t, 0.0);
      if (mean > 0.0) entropy -= mean * std::log(mean);
    }
    values[px] = static_cast<float>(std::max(entropy, 0.0));
  }
  return out;
}

ErrorMap FilterErrorMap(const ErrorMap& u, const InstanceLabelMap& instances) {
  CheckSameShape(u, instances, "FilterErrorMap");
  ErrorMap out(u.height(), u.width());
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  auto dst = out.values();
  auto src = u.values();
  auto labels = instances.values();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    dst[i] = labels[i] != 0 ? src[i] : 0.0f;
  }
  return out;
}

}  // namespace iaood
