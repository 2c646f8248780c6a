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

// Reference implementations used as test oracles. Everything here is written
// the slow, obvious way and shares no code with the library kernels.

#ifndef IAOOD_TESTS_SUPPORT_ORACLES_H_
#define IAOOD_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "iaood/grid.h"
#include "iaood/instances.h"
#include "iaood/metrics.h"

namespace iaood::oracle {

struct Labeled {
  double score;
  bool positive;
};

inline ScoredPopulation ToPopulation(const std::vector<Labeled>& items) {
  ScoredPopulation pop;
  for (const Labeled& x : items) pop.Add(x.score, x.positive);
  return pop;
}

inline std::vector<double> DistinctDescending(const std::vector<Labeled>& items) {
  std::set<double, std::greater<>> distinct;
  for (const Labeled& x : items) distinct.insert(x.score);
  return {distinct.begin(), distinct.end()};
}

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
};

// Counts of positives / negatives scoring at or above t.
inline Counts CountAtOrAbove(const std::vector<Labeled>& items, double t) {
  Counts c;
  for (const Labeled& x : items) {
    if (x.score >= t) (x.positive ? c.tp : c.fp)++;
  }
  return c;
}

inline std::size_t CountPositives(const std::vector<Labeled>& items) {
  return static_cast<std::size_t>(std::count_if(
      items.begin(), items.end(), [](const Labeled& x) { return x.positive; }));
}

// ROC curve by re-counting the whole population at every distinct threshold.
inline std::vector<std::pair<double, double>> Roc(
    const std::vector<Labeled>& items) {
  const double p = static_cast<double>(CountPositives(items));
  const double n = static_cast<double>(items.size()) - p;
  std::vector<std::pair<double, double>> points = {{0.0, 0.0}};
  for (double t : DistinctDescending(items)) {
    const Counts c = CountAtOrAbove(items, t);
    points.emplace_back(static_cast<double>(c.fp) / n,
                        static_cast<double>(c.tp) / p);
  }
  return points;
}

inline double Auroc(const std::vector<Labeled>& items) {
  const auto points = Roc(items);
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    area += (points[k].first - points[k - 1].first) *
            (points[k].second + points[k - 1].second) / 2.0;
  }
  return area;
}

inline double FprAtTpr(const std::vector<Labeled>& items, double target) {
  for (const auto& [fpr, tpr] : Roc(items)) {
    if (tpr >= target) return fpr;
  }
  return 1.0;
}

// Non-interpolated AP; recall denominator may exceed the positives present.
inline double AveragePrecision(const std::vector<Labeled>& items,
                               double denominator) {
  double ap = 0.0;
  double previous_recall = 0.0;
  for (double t : DistinctDescending(items)) {
    const Counts c = CountAtOrAbove(items, t);
    const double recall = static_cast<double>(c.tp) / denominator;
    const double precision =
        static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    ap += (recall - previous_recall) * precision;
    previous_recall = recall;
  }
  return ap;
}

inline double Aupr(const std::vector<Labeled>& items) {
  return AveragePrecision(items, static_cast<double>(CountPositives(items)));
}

// Probability that a random positive outranks a random negative, ties 1/2.
inline double MannWhitney(const std::vector<Labeled>& items) {
  double wins = 0.0;
  double pairs = 0.0;
  for (const Labeled& a : items) {
    if (!a.positive) continue;
    for (const Labeled& b : items) {
      if (b.positive) continue;
      pairs += 1.0;
      if (a.score > b.score) wins += 1.0;
      else if (a.score == b.score) wins += 0.5;
    }
  }
  return wins / pairs;
}

struct InstanceStats {
  std::size_t area = 0;
  BoundingBox bbox;
  double mean = 0.0;
};

inline std::map<std::uint16_t, InstanceStats> AggregateByPixelLoop(
    const ErrorMap& u, const InstanceLabelMap& labels) {
  std::map<std::uint16_t, std::vector<float>> values;
  std::map<std::uint16_t, InstanceStats> out;
  for (std::size_t h = 0; h < labels.height(); ++h) {
    for (std::size_t w = 0; w < labels.width(); ++w) {
      const std::uint16_t id = labels.at(h, w);
      if (id == 0) continue;
      auto [it, fresh] = out.try_emplace(id);
      InstanceStats& s = it->second;
      if (fresh) s.bbox = {h, w, h, w};
      s.bbox.min_h = std::min(s.bbox.min_h, h);
      s.bbox.min_w = std::min(s.bbox.min_w, w);
      s.bbox.max_h = std::max(s.bbox.max_h, h);
      s.bbox.max_w = std::max(s.bbox.max_w, w);
      values[id].push_back(u.at(h, w));
    }
  }
  for (auto& [id, s] : out) {
    long double sum = 0.0L;
    for (float v : values[id]) sum += v;
    s.area = values[id].size();
    s.mean = static_cast<double>(sum / static_cast<long double>(s.area));
  }
  return out;
}

// Breadth-first flood fill; ids assigned in raster order of each component's
// first pixel, pixels of stuff classes stay 0.
inline InstanceLabelMap FloodFill(const SemanticLabelMap& semantic, int neighbours,
                                  const std::set<std::uint8_t>& stuff = {}) {
  const std::size_t H = semantic.height();
  const std::size_t W = semantic.width();
  InstanceLabelMap out(H, W);
  std::vector<bool> seen(H * W, false);
  std::uint16_t next = 0;
  for (std::size_t start = 0; start < H * W; ++start) {
    if (seen[start] || stuff.contains(semantic[start])) continue;
    ++next;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    seen[start] = true;
    while (!frontier.empty()) {
      const std::size_t i = frontier.front();
      frontier.pop();
      out[i] = next;
      const long h = static_cast<long>(i / W);
      const long w = static_cast<long>(i % W);
      for (long dh = -1; dh <= 1; ++dh) {
        for (long dw = -1; dw <= 1; ++dw) {
          if (dh == 0 && dw == 0) continue;
          if (neighbours == 4 && dh != 0 && dw != 0) continue;
          const long nh = h + dh;
          const long nw = w + dw;
          if (nh < 0 || nw < 0 || nh >= static_cast<long>(H) ||
              nw >= static_cast<long>(W)) {
            continue;
          }
          const std::size_t j = static_cast<std::size_t>(nh) * W +
                                static_cast<std::size_t>(nw);
          if (seen[j] || semantic[j] != semantic[i]) continue;
          seen[j] = true;
          frontier.push(j);
        }
      }
    }
  }
  return out;
}

// Random semantic map made of a few classes with blobby structure, so that
// components of many sizes appear.
inline SemanticLabelMap RandomSemantic(std::mt19937_64& rng, std::size_t h,
                                       std::size_t w, int classes) {
  std::uniform_int_distribution<int> cls(0, classes - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  SemanticLabelMap out(h, w);
  const double keep = coin(rng) * 0.8;
  for (std::size_t i = 0; i < h * w; ++i) {
    const bool copy_left = i % w != 0 && coin(rng) < keep;
    const bool copy_up = i >= w && coin(rng) < keep;
    if (copy_left) out[i] = out[i - 1];
    else if (copy_up) out[i] = out[i - w];
    else out[i] = static_cast<std::uint8_t>(cls(rng));
  }
  return out;
}

// Random instance map with ids drawn from a sparse id set (ids need not be
// contiguous) and some background.
inline InstanceLabelMap RandomInstances(std::mt19937_64& rng, std::size_t h,
                                        std::size_t w, int max_ids) {
  std::uniform_int_distribution<int> count(1, max_ids);
  std::uniform_int_distribution<int> id(1, 65535);
  std::vector<std::uint16_t> ids(static_cast<std::size_t>(count(rng)));
  for (auto& v : ids) v = static_cast<std::uint16_t>(id(rng));
  ids.push_back(0);
  std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
  InstanceLabelMap out(h, w);
  for (std::size_t i = 0; i < h * w; ++i) out[i] = ids[pick(rng)];
  return out;
}

inline ErrorMap RandomErrorMap(std::mt19937_64& rng, std::size_t h,
                               std::size_t w) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  ErrorMap out(h, w);
  for (float& v : out.values()) v = u(rng);
  return out;
}

}  // namespace iaood::oracle

#endif  // IAOOD_TESTS_SUPPORT_ORACLES_H_
