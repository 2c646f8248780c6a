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

#include <omp.h>

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "iaood/instances.h"
#include "iaood/metrics.h"
#include "iaood/score_maps.h"
#include "iaood/serial.h"
#include "support/oracles.h"

namespace iaood {
namespace {

class ThreadCounts : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }

 private:
  int saved_ = 1;
};

SoftmaxStack RandomStack(std::mt19937_64& rng, std::size_t c, std::size_t h,
                         std::size_t w) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SoftmaxStack s(c, h, w);
  for (std::size_t i = 0; i < h * w; ++i) {
    std::vector<double> p(c);
    double z = 0.0;
    for (double& v : p) z += (v = u(rng));
    for (std::size_t k = 0; k < c; ++k) {
      s.at(k, i / w, i % w) = static_cast<float>(p[k] / z);
    }
  }
  return s;
}

TEST_P(ThreadCounts, ScoreMapsBitIdentical) {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 10; ++iter) {
    std::vector<SoftmaxStack> samples;
    for (int t = 0; t < 3; ++t) samples.push_back(RandomStack(rng, 5, 37, 71));
    ASSERT_EQ(McpScore(samples[0]), serial::McpScore(samples[0]));
    ASSERT_EQ(MeanSoftmaxEntropy(samples), serial::MeanSoftmaxEntropy(samples));
    const ErrorMap u = oracle::RandomErrorMap(rng, 37, 71);
    const InstanceLabelMap m = oracle::RandomInstances(rng, 37, 71, 5);
    ASSERT_EQ(FilterErrorMap(u, m), serial::FilterErrorMap(u, m));
  }
}

TEST_P(ThreadCounts, AggregationMatchesSerial) {
  std::mt19937_64 rng(32);
  for (int iter = 0; iter < 20; ++iter) {
    const ErrorMap u = oracle::RandomErrorMap(rng, 150, 97);
    const InstanceLabelMap m = oracle::RandomInstances(rng, 150, 97, 40);
    const auto parallel = AggregateInstanceScores(u, m);
    const auto reference = serial::AggregateInstanceScores(u, m);
    ASSERT_EQ(parallel.size(), reference.size());
    for (std::size_t k = 0; k < parallel.size(); ++k) {
      ASSERT_EQ(parallel[k].id, reference[k].id);
      ASSERT_EQ(parallel[k].area, reference[k].area);
      ASSERT_EQ(parallel[k].bbox, reference[k].bbox);
      ASSERT_NEAR(parallel[k].score, reference[k].score, 1e-12);
    }
  }
}

TEST_P(ThreadCounts, AggregationIndependentOfThreadCount) {
  std::mt19937_64 rng(33);
  const ErrorMap u = oracle::RandomErrorMap(rng, 300, 211);
  const InstanceLabelMap m = oracle::RandomInstances(rng, 300, 211, 12);
  const auto here = AggregateInstanceScores(u, m);
  omp_set_num_threads(1);
  const auto single = AggregateInstanceScores(u, m);
  ASSERT_EQ(here, single);
}

TEST_P(ThreadCounts, PixelPopulationMatchesSerial) {
  std::mt19937_64 rng(34);
  const ErrorMap u = oracle::RandomErrorMap(rng, 120, 130);
  BinaryMask truth(120, 130);
  for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = rng() % 7 == 0;
  const ScoredPopulation a = PixelPopulation(u, truth);
  const ScoredPopulation b = serial::PixelPopulation(u, truth);
  ASSERT_TRUE(std::equal(a.scores().begin(), a.scores().end(), b.scores().begin(),
                         b.scores().end()));
  ASSERT_TRUE(std::equal(a.labels().begin(), a.labels().end(), b.labels().begin(),
                         b.labels().end()));
  EXPECT_EQ(Auroc(a), Auroc(b));
}

INSTANTIATE_TEST_SUITE_P(Omp, ThreadCounts, ::testing::Values(1, 2, 3, 4, 8));

}  // namespace
}  // namespace iaood
