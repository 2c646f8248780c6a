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

#ifndef IAOOD_GRID_H_
#define IAOOD_GRID_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iaood/error.h"

namespace iaood {

// Dense row-major H x W raster.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), values_(height * width, fill) {}
  Grid(std::size_t height, std::size_t width, std::vector<T> values)
      : height_(height), width_(width), values_(std::move(values)) {
    if (values_.size() != height_ * width_) {
      throw Error(ErrorCode::kInvalidDims,
                  "grid payload size does not match dims");
    }
  }

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  T& at(std::size_t h, std::size_t w) { return values_[h * width_ + w]; }
  const T& at(std::size_t h, std::size_t w) const {
    return values_[h * width_ + w];
  }
  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  std::span<const T> row(std::size_t h) const {
    return std::span<const T>(values_).subspan(h * width_, width_);
  }

  bool SameShape(std::size_t height, std::size_t width) const {
    return height_ == height && width_ == width;
  }
  template <typename U>
  bool SameShape(const Grid<U>& other) const {
    return SameShape(other.height(), other.width());
  }

  bool operator==(const Grid& other) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> values_;
};

// Per-pixel probability of error / anomaly, nominally in [0, 1].
using ErrorMap = Grid<float>;
// 0 is background, k >= 1 is instance k. Ids need not be contiguous.
using InstanceLabelMap = Grid<std::uint16_t>;
// Ground-truth class id per pixel.
using SemanticLabelMap = Grid<std::uint8_t>;
// Strictly {0, 1}.
using BinaryMask = Grid<std::uint8_t>;

// C x H x W class-probability volume, channel-major.
class SoftmaxStack {
 public:
  SoftmaxStack() = default;
  SoftmaxStack(std::size_t classes, std::size_t height, std::size_t width,
               float fill = 0.0f)
      : classes_(classes),
        height_(height),
        width_(width),
        values_(classes * height * width, fill) {}
  SoftmaxStack(std::size_t classes, std::size_t height, std::size_t width,
               std::vector<float> values)
      : classes_(classes),
        height_(height),
        width_(width),
        values_(std::move(values)) {
    if (values_.size() != classes_ * height_ * width_) {
      throw Error(ErrorCode::kInvalidDims,
                  "softmax payload size does not match dims");
    }
  }

  std::size_t classes() const { return classes_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t plane_size() const { return height_ * width_; }

  float& at(std::size_t c, std::size_t h, std::size_t w) {
    return values_[(c * height_ + h) * width_ + w];
  }
  float at(std::size_t c, std::size_t h, std::size_t w) const {
    return values_[(c * height_ + h) * width_ + w];
  }
  // Value of channel c at flat pixel index i.
  float channel(std::size_t c, std::size_t i) const {
    return values_[c * plane_size() + i];
  }

  std::span<float> values() { return values_; }
  std::span<const float> values() const { return values_; }

  bool operator==(const SoftmaxStack& other) const = default;

 private:
  std::size_t classes_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> values_;
};

template <typename A, typename B>
void CheckSameShape(const A& a, const B& b, const char* what) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": " + std::to_string(a.height()) + "x" +
                    std::to_string(a.width()) + " vs " +
                    std::to_string(b.height()) + "x" +
                    std::to_string(b.width()));
  }
}

}  // namespace iaood

#endif  // IAOOD_GRID_H_
