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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "iaood/score_maps.h"
#include "support/expect_error.h"
#include "support/oracles.h"

namespace iaood {
namespace {

SoftmaxStack OnePixel(std::vector<float> probs) {
  const std::size_t c = probs.size();
  return SoftmaxStack(c, 1, 1, std::move(probs));
}

// Random valid softmax stack: normalised exponentials in double, then f32.
SoftmaxStack RandomSoftmax(std::mt19937_64& rng, std::size_t c, std::size_t h,
                           std::size_t w) {
  std::normal_distribution<double> logit(0.0, 2.0);
  SoftmaxStack s(c, h, w);
  for (std::size_t i = 0; i < h * w; ++i) {
    std::vector<double> e(c);
    for (double& v : e) v = std::exp(logit(rng));
    const double z = std::accumulate(e.begin(), e.end(), 0.0);
    for (std::size_t k = 0; k < c; ++k) {
      s.at(k, i / w, i % w) = static_cast<float>(e[k] / z);
    }
  }
  return s;
}

TEST(McpScore, Examples) {
  EXPECT_FLOAT_EQ(McpScore(OnePixel({1.0f, 0.0f, 0.0f})).at(0, 0), 0.0f);
  EXPECT_NEAR(McpScore(OnePixel({1.0f / 3, 1.0f / 3, 1.0f / 3})).at(0, 0),
              2.0 / 3.0, 1e-6);
  EXPECT_NEAR(McpScore(OnePixel({0.7f, 0.2f, 0.1f})).at(0, 0), 0.3, 1e-6);
}

TEST(McpScore, RejectsInvalidDistribution) {
  EXPECT_IAOOD_ERROR(McpScore(OnePixel({0.7f, 0.7f})),
                     ErrorCode::kInvalidDistribution);
  EXPECT_IAOOD_ERROR(McpScore(OnePixel({1.2f, -0.2f})),
                     ErrorCode::kInvalidDistribution);
}

TEST(McpScore, ChannelPermutationInvariant) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 50; ++iter) {
    const SoftmaxStack s = RandomSoftmax(rng, 5, 4, 6);
    std::vector<std::size_t> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    SoftmaxStack p(5, 4, 6);
    for (std::size_t c = 0; c < 5; ++c) {
      for (std::size_t h = 0; h < 4; ++h) {
        for (std::size_t w = 0; w < 6; ++w) p.at(perm[c], h, w) = s.at(c, h, w);
      }
    }
    ASSERT_EQ(McpScore(s), McpScore(p));
  }
}

TEST(MeanSoftmaxEntropy, Examples) {
  const std::vector<SoftmaxStack> one_hot = {OnePixel({0.0f, 1.0f, 0.0f})};
  EXPECT_EQ(MeanSoftmaxEntropy(one_hot).at(0, 0), 0.0f);

  const std::vector<SoftmaxStack> split = {OnePixel({1.0f, 0.0f}),
                                           OnePixel({0.0f, 1.0f})};
  EXPECT_NEAR(MeanSoftmaxEntropy(split).at(0, 0), std::log(2.0), 1e-6);

  EXPECT_IAOOD_ERROR(MeanSoftmaxEntropy(std::vector<SoftmaxStack>{}),
                     ErrorCode::kEmptySampleList);
}

TEST(MeanSoftmaxEntropy, ShapeMismatch) {
  const std::vector<SoftmaxStack> samples = {SoftmaxStack(2, 1, 1, 0.5f),
                                             SoftmaxStack(2, 1, 2, 0.5f)};
  EXPECT_IAOOD_ERROR(MeanSoftmaxEntropy(samples), ErrorCode::kDimensionMismatch);
}

TEST(MeanSoftmaxEntropy, MatchesDirectFormula) {
  std::mt19937_64 rng(12);
  std::vector<SoftmaxStack> samples;
  for (int t = 0; t < 4; ++t) samples.push_back(RandomSoftmax(rng, 3, 2, 3));
  const ErrorMap out = MeanSoftmaxEntropy(samples);
  for (std::size_t h = 0; h < 2; ++h) {
    for (std::size_t w = 0; w < 3; ++w) {
      double entropy = 0.0;
      for (std::size_t c = 0; c < 3; ++c) {
        double mean = 0.0;
        for (const auto& s : samples) mean += s.at(c, h, w) / 4.0;
        if (mean > 0.0) entropy -= mean * std::log(mean);
      }
      EXPECT_NEAR(out.at(h, w), entropy, 1e-6);
      EXPECT_LE(out.at(h, w), std::log(3.0) + 1e-6);
    }
  }
}

TEST(MeanSoftmaxEntropy, SampleOrderInvariant) {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 30; ++iter) {
    std::vector<SoftmaxStack> samples;
    for (int t = 0; t < 5; ++t) samples.push_back(RandomSoftmax(rng, 4, 3, 3));
    const ErrorMap reference = MeanSoftmaxEntropy(samples);
    std::shuffle(samples.begin(), samples.end(), rng);
    const ErrorMap shuffled = MeanSoftmaxEntropy(samples);
    for (std::size_t i = 0; i < reference.size(); ++i) {
      ASSERT_NEAR(reference[i], shuffled[i], 1e-6);
    }
  }
}

TEST(MeanSoftmaxEntropy, IdenticalSamplesEqualSingleSample) {
  std::mt19937_64 rng(14);
  for (int iter = 0; iter < 30; ++iter) {
    const SoftmaxStack s = RandomSoftmax(rng, 6, 3, 4);
    const std::vector<SoftmaxStack> single = {s};
    const std::vector<SoftmaxStack> repeated(7, s);
    const ErrorMap a = MeanSoftmaxEntropy(single);
    const ErrorMap b = MeanSoftmaxEntropy(repeated);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], 1e-6);
  }
}

TEST(FilterErrorMap, Examples) {
  const ErrorMap u(1, 2, std::vector<float>{0.4f, 0.9f});
  EXPECT_EQ(FilterErrorMap(u, InstanceLabelMap(1, 2)), ErrorMap(1, 2, 0.0f));
  EXPECT_EQ(FilterErrorMap(u, InstanceLabelMap(1, 2, std::uint16_t{3})), u);
  EXPECT_EQ(FilterErrorMap(u, InstanceLabelMap(1, 2, std::vector<std::uint16_t>{0, 5})),
            ErrorMap(1, 2, std::vector<float>{0.0f, 0.9f}));
  EXPECT_IAOOD_ERROR(FilterErrorMap(u, InstanceLabelMap(2, 1)),
                     ErrorCode::kDimensionMismatch);
}

TEST(FilterErrorMap, IdempotentAndNeverIncreases) {
  std::mt19937_64 rng(15);
  for (int iter = 0; iter < 100; ++iter) {
    const ErrorMap u = oracle::RandomErrorMap(rng, 9, 13);
    const InstanceLabelMap m = oracle::RandomInstances(rng, 9, 13, 4);
    const ErrorMap once = FilterErrorMap(u, m);
    ASSERT_EQ(FilterErrorMap(once, m), once);
    for (std::size_t i = 0; i < u.size(); ++i) ASSERT_LE(once[i], u[i]);
  }
}

}  // namespace
}  // namespace iaood
