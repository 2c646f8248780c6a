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

#include "iaood/instances.h"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <iterator>
#include <vector>

namespace iaood {
namespace {

// Row-block height for the aggregation partition. Fixed so that partial sums
// are merged identically whatever the thread count.
constexpr std::size_t kRowsPerBlock = 32;

struct Accumulator {
  double sum = 0.0;
  std::size_t count = 0;
  BoundingBox bbox{std::numeric_limits<std::size_t>::max(),
                   std::numeric_limits<std::size_t>::max(), 0, 0};

  void Add(double value, std::size_t h, std::size_t w) {
    sum += value;
    ++count;
    bbox.min_h = std::min(bbox.min_h, h);
    bbox.min_w = std::min(bbox.min_w, w);
    bbox.max_h = std::max(bbox.max_h, h);
    bbox.max_w = std::max(bbox.max_w, w);
  }

  void Merge(const Accumulator& other) {
    sum += other.sum;
    count += other.count;
    bbox.min_h = std::min(bbox.min_h, other.bbox.min_h);
    bbox.min_w = std::min(bbox.min_w, other.bbox.min_w);
    bbox.max_h = std::max(bbox.max_h, other.bbox.max_h);
    bbox.max_w = std::max(bbox.max_w, other.bbox.max_w);
  }
};

struct BlockPartial {
  std::vector<std::uint16_t> labels;  // ascending
  std::vector<Accumulator> accumulators;
};

class DisjointSets {
 public:
  std::uint32_t Make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }

  std::uint32_t Find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Keeps the smaller root so roots stay the earliest provisional label.
  std::uint32_t Union(std::uint32_t a, std::uint32_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return a;
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

std::vector<ScoredInstance> AggregateInstanceScores(
    const ErrorMap& u, const InstanceLabelMap& instances) {
  CheckSameShape(u, instances, "AggregateInstanceScores");
  const std::size_t height = u.height();
  const std::size_t width = u.width();
  auto labels = instances.values();
  auto values = u.values();

  std::uint16_t max_label = 0;
  const auto n = static_cast<std::ptrdiff_t>(labels.size());
#pragma omp parallel for reduction(max : max_label)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    max_label = std::max(max_label, labels[i]);
  }
  if (max_label == 0) return {};

  const std::size_t num_blocks = (height + kRowsPerBlock - 1) / kRowsPerBlock;
  std::vector<BlockPartial> partials(num_blocks);

#pragma omp parallel
  {
    std::vector<Accumulator> scratch(std::size_t{max_label} + 1);
    std::vector<std::uint8_t> seen(std::size_t{max_label} + 1, 0);
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(num_blocks);
         ++b) {
      const std::size_t row_begin = static_cast<std::size_t>(b) * kRowsPerBlock;
      const std::size_t row_end = std::min(height, row_begin + kRowsPerBlock);
      BlockPartial& partial = partials[static_cast<std::size_t>(b)];
      for (std::size_t h = row_begin; h < row_end; ++h) {
        const std::size_t base = h * width;
        for (std::size_t w = 0; w < width; ++w) {
          const std::uint16_t id = labels[base + w];
          if (id == 0) continue;
          if (!seen[id]) {
            seen[id] = 1;
            partial.labels.push_back(id);
          }
          scratch[id].Add(values[base + w], h, w);
        }
      }
      std::sort(partial.labels.begin(), partial.labels.end());
      partial.accumulators.reserve(partial.labels.size());
      for (std::uint16_t id : partial.labels) {
        partial.accumulators.push_back(scratch[id]);
        scratch[id] = Accumulator{};
        seen[id] = 0;
      }
    }
  }

  std::vector<Accumulator> totals(std::size_t{max_label} + 1);
  for (const BlockPartial& partial : partials) {
    for (std::size_t k = 0; k < partial.labels.size(); ++k) {
      totals[partial.labels[k]].Merge(partial.accumulators[k]);
    }
  }

  std::vector<ScoredInstance> out;
  for (std::size_t id = 1; id < totals.size(); ++id) {
    const Accumulator& acc = totals[id];
    if (acc.count == 0) continue;
    out.push_back({static_cast<std::uint16_t>(id), acc.count, acc.bbox,
                   acc.sum / static_cast<double>(acc.count)});
  }
  return out;
}

std::vector<ScoredInstance> SizeFilter(std::span<const ScoredInstance> scored,
                                       SizeThreshold threshold) {
  std::vector<ScoredInstance> kept;
  kept.reserve(scored.size());
  std::copy_if(scored.begin(), scored.end(), std::back_inserter(kept),
               [&](const ScoredInstance& s) { return threshold.Keeps(s.area); });
  return kept;
}

InstanceLabelMap GtDetector(const SemanticLabelMap& semantic,
                            Connectivity connectivity,
                            const std::set<std::uint8_t>& stuff_classes) {
  const std::size_t height = semantic.height();
  const std::size_t width = semantic.width();
  std::array<bool, 256> is_stuff{};
  for (std::uint8_t c : stuff_classes) is_stuff[c] = true;

  // Provisional labels are 1-based; 0 marks stuff.
  std::vector<std::uint32_t> provisional(semantic.size(), 0);
  DisjointSets sets;
  sets.Make();  // slot 0 unused

  const bool eight = connectivity == Connectivity::kEight;
  for (std::size_t h = 0; h < height; ++h) {
    for (std::size_t w = 0; w < width; ++w) {
      const std::size_t i = h * width + w;
      const std::uint8_t cls = semantic[i];
      if (is_stuff[cls]) continue;
      std::uint32_t label = 0;
      auto visit = [&](std::size_t j) {
        if (semantic[j] != cls || provisional[j] == 0) return;
        label = label == 0 ? sets.Find(provisional[j])
                           : sets.Union(label, provisional[j]);
      };
      if (w > 0) visit(i - 1);
      if (h > 0) {
        visit(i - width);
        if (eight && w > 0) visit(i - width - 1);
        if (eight && w + 1 < width) visit(i - width + 1);
      }
      provisional[i] = label != 0 ? label : sets.Make();
    }
  }

  std::vector<std::uint32_t> final_id(sets.size(), 0);
  std::uint32_t next = 0;
  InstanceLabelMap out(height, width);
  for (std::size_t i = 0; i < provisional.size(); ++i) {
    if (provisional[i] == 0) continue;
    const std::uint32_t root = sets.Find(provisional[i]);
    if (final_id[root] == 0) {
      if (next == std::numeric_limits<std::uint16_t>::max()) {
        throw Error(ErrorCode::kTooManyInstances,
                    "more than 65535 connected regions");
      }
      final_id[root] = ++next;
    }
    out[i] = static_cast<std::uint16_t>(final_id[root]);
  }
  return out;
}

InstanceLabelMap RelabelRasterOrder(const InstanceLabelMap& labels) {
  std::vector<std::uint16_t> mapping(std::size_t{1} << 16, 0);
  std::uint16_t next = 0;
  InstanceLabelMap out(labels.height(), labels.width());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint16_t id = labels[i];
    if (id == 0) continue;
    if (mapping[id] == 0) mapping[id] = ++next;
    out[i] = mapping[id];
  }
  return out;
}

}  // namespace iaood
