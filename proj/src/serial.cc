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

#include "iaood/serial.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "iaood/score_maps.h"

namespace iaood::serial {

ErrorMap McpScore(const SoftmaxStack& softmax) {
  CheckDistribution(softmax);
  ErrorMap out(softmax.height(), softmax.width());
  for (std::size_t h = 0; h < softmax.height(); ++h) {
    for (std::size_t w = 0; w < softmax.width(); ++w) {
      float best = 0.0f;
      for (std::size_t c = 0; c < softmax.classes(); ++c) {
        best = std::max(best, softmax.at(c, h, w));
      }
      out.at(h, w) = 1.0f - best;
    }
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
  for (std::size_t h = 0; h < first.height(); ++h) {
    for (std::size_t w = 0; w < first.width(); ++w) {
      double entropy = 0.0;
      for (std::size_t c = 0; c < first.classes(); ++c) {
        double sum = 0.0;
        for (const SoftmaxStack& s : samples) sum += s.at(c, h, w);
        const double mean =
            std::max(sum / static_cast<double>(samples.size()), 0.0);
        if (mean > 0.0) entropy -= mean * std::log(mean);
      }
      out.at(h, w) = static_cast<float>(std::max(entropy, 0.0));
    }
  }
  return out;
}

ErrorMap FilterErrorMap(const ErrorMap& u, const InstanceLabelMap& instances) {
  CheckSameShape(u, instances, "FilterErrorMap");
  ErrorMap out(u.height(), u.width());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (instances[i] != 0) out[i] = u[i];
  }
  return out;
}

std::vector<ScoredInstance> AggregateInstanceScores(
    const ErrorMap& u, const InstanceLabelMap& instances) {
  CheckSameShape(u, instances, "AggregateInstanceScores");
  std::map<std::uint16_t, ScoredInstance> by_id;
  std::map<std::uint16_t, double> sums;
  for (std::size_t h = 0; h < u.height(); ++h) {
    for (std::size_t w = 0; w < u.width(); ++w) {
      const std::uint16_t id = instances.at(h, w);
      if (id == 0) continue;
      auto [it, inserted] = by_id.try_emplace(id);
      ScoredInstance& s = it->second;
      if (inserted) {
        s.id = id;
        s.bbox = {h, w, h, w};
      }
      ++s.area;
      s.bbox.min_h = std::min(s.bbox.min_h, h);
      s.bbox.min_w = std::min(s.bbox.min_w, w);
      s.bbox.max_h = std::max(s.bbox.max_h, h);
      s.bbox.max_w = std::max(s.bbox.max_w, w);
      sums[id] += u.at(h, w);
    }
  }
  std::vector<ScoredInstance> out;
  out.reserve(by_id.size());
  for (auto& [id, s] : by_id) {
    s.score = sums[id] / static_cast<double>(s.area);
    out.push_back(s);
  }
  return out;
}

ScoredPopulation PixelPopulation(const ErrorMap& u, const BinaryMask& truth) {
  CheckSameShape(u, truth, "PixelPopulation");
  ScoredPopulation population;
  population.Reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (truth[i] > 1) {
      throw Error(ErrorCode::kInvalidArgument, "truth map must be binary");
    }
    population.Add(u[i], truth[i] == 1);
  }
  return population;
}

}  // namespace iaood::serial
