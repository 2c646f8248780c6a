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

#ifndef IAOOD_DATASET_H_
#define IAOOD_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "iaood/instances.h"
#include "iaood/synth.h"

namespace iaood {

// On-disk layout written by GenerateDataset:
//   <root>/manifest.json
//   <root>/sample_%05d/semantic.iat        u8  H x W
//   <root>/sample_%05d/gt_instances.iat    u16 H x W
//   <root>/sample_%05d/det_instances.iat   u16 H x W (corrupted GT masks)
//   <root>/sample_%05d/error.iat           f32 H x W
//   <root>/sample_%05d/softmax_t%02d.iat   f32 C x H x W (optional)
inline constexpr char kManifestFile[] = "manifest.json";
inline constexpr char kSemanticFile[] = "semantic.iat";
inline constexpr char kGtInstancesFile[] = "gt_instances.iat";
inline constexpr char kDetInstancesFile[] = "det_instances.iat";
inline constexpr char kErrorFile[] = "error.iat";

std::string SampleDirName(std::size_t index);
std::string SoftmaxFileName(std::size_t t);

struct DatasetSpec {
  std::size_t n_samples = 10;
  std::uint64_t seed = 0;
  SceneSpec scene;  // scene.seed is replaced per sample
  NoiseSpec noise;
  CorruptionSpec corruption;
  std::size_t softmax_samples = 0;
  Connectivity connectivity = Connectivity::kEight;
};

struct SampleSeeds {
  std::uint64_t scene = 0;
  std::uint64_t error = 0;
  std::uint64_t masks = 0;
  std::uint64_t softmax = 0;
};

SampleSeeds SeedsForSample(std::uint64_t master_seed, std::size_t index);

struct Manifest {
  DatasetSpec spec;
  std::set<std::uint8_t> ood_classes;
  std::set<std::uint8_t> stuff_classes;
  std::vector<std::string> sample_dirs;
};

// Writes the dataset under root, which must be absent or empty unless force
// is set (then its contents are replaced). Samples are generated in parallel.
// On failure everything written is removed and the first error (by sample
// index) is rethrown.
void GenerateDataset(const DatasetSpec& spec, const std::filesystem::path& root,
                     bool force = false);

Manifest ReadManifest(const std::filesystem::path& root);
std::string ManifestJson(const DatasetSpec& spec);

}  // namespace iaood

#endif  // IAOOD_DATASET_H_
