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

#include "iaood/dataset.h"

#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>

#include "iaood/rng.h"
#include "iaood/tensor_io.h"
#include "json.hpp"

namespace iaood {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Stream : std::uint64_t { kSceneStream = 1, kErrorStream, kMaskStream, kSoftmaxStream };

const char* ShapeName(Shape s) {
  switch (s) {
    case Shape::kRectangle: return "rectangle";
    case Shape::kEllipse: return "ellipse";
    case Shape::kLShape: return "l-shape";
  }
  return "?";
}

Shape ParseShape(const std::string& name) {
  if (name == "rectangle") return Shape::kRectangle;
  if (name == "ellipse") return Shape::kEllipse;
  if (name == "l-shape") return Shape::kLShape;
  throw Error(ErrorCode::kInvalidArgument, "unknown shape " + name);
}

std::set<std::uint8_t> OodClassesOf(const SceneSpec& s) {
  return {static_cast<std::uint8_t>(s.classes - 1)};
}

std::set<std::uint8_t> StuffClassesOf(const SceneSpec& s) {
  std::set<std::uint8_t> out;
  for (std::size_t c = 0; c < s.stuff_classes; ++c) {
    out.insert(static_cast<std::uint8_t>(c));
  }
  return out;
}

json ManifestObject(const DatasetSpec& spec) {
  json shapes = json::array();
  for (Shape s : spec.scene.shapes) shapes.push_back(ShapeName(s));
  json samples = json::array();
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    const SampleSeeds seeds = SeedsForSample(spec.seed, i);
    samples.push_back({{"dir", SampleDirName(i)},
                       {"scene_seed", seeds.scene},
                       {"error_seed", seeds.error},
                       {"mask_seed", seeds.masks},
                       {"softmax_seed", seeds.softmax}});
  }
  return {
      {"format", "iaood-dataset"},
      {"version", 1},
      {"n_samples", spec.n_samples},
      {"seed", spec.seed},
      {"connectivity", static_cast<int>(spec.connectivity)},
      {"softmax_samples", spec.softmax_samples},
      {"ood_classes", OodClassesOf(spec.scene)},
      {"stuff_classes", StuffClassesOf(spec.scene)},
      {"scene",
       {{"height", spec.scene.height},
        {"width", spec.scene.width},
        {"n_objects", spec.scene.n_objects},
        {"ood_fraction", spec.scene.ood_fraction},
        {"shapes", shapes},
        {"classes", spec.scene.classes},
        {"stuff_classes", spec.scene.stuff_classes},
        {"min_side", spec.scene.min_side},
        {"max_side", spec.scene.max_side}}},
      {"noise",
       {{"boundary_noise", spec.noise.boundary_noise},
        {"background_noise", spec.noise.background_noise},
        {"ood_signal", spec.noise.ood_signal},
        {"in_dist_signal", spec.noise.in_dist_signal},
        {"sigma", spec.noise.sigma}}},
      {"corruption",
       {{"erosion", spec.corruption.erosion},
        {"dilation", spec.corruption.dilation},
        {"drop_probability", spec.corruption.drop_probability},
        {"ood_drop_probability", spec.corruption.ood_drop_probability}}},
      {"samples", samples},
  };
}

void GenerateSample(const DatasetSpec& spec, std::size_t index,
                    const fs::path& dir) {
  const SampleSeeds seeds = SeedsForSample(spec.seed, index);
  SceneSpec scene_spec = spec.scene;
  scene_spec.seed = seeds.scene;
  const Scene scene = GenerateScene(scene_spec);
  const ErrorMap error = GenerateErrorMap(scene, spec.noise, seeds.error);
  const InstanceLabelMap detections =
      CorruptMasks(scene.gt_instances, spec.corruption, OodInstanceIds(scene),
                   seeds.masks);

  fs::create_directories(dir);
  WriteTensor(scene.semantic, dir / kSemanticFile);
  WriteTensor(scene.gt_instances, dir / kGtInstancesFile);
  WriteTensor(detections, dir / kDetInstancesFile);
  WriteTensor(error, dir / kErrorFile);
  if (spec.softmax_samples > 0) {
    const auto stacks = GenerateSoftmaxSamples(scene, error, spec.softmax_samples,
                                               seeds.softmax);
    for (std::size_t t = 0; t < stacks.size(); ++t) {
      WriteTensor(stacks[t], dir / SoftmaxFileName(t));
    }
  }
}

}  // namespace

std::string SampleDirName(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "sample_%05zu", index);
  return buf;
}

std::string SoftmaxFileName(std::size_t t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "softmax_t%02zu.iat", t);
  return buf;
}

SampleSeeds SeedsForSample(std::uint64_t master_seed, std::size_t index) {
  return {DeriveSeed(master_seed, index, kSceneStream),
          DeriveSeed(master_seed, index, kErrorStream),
          DeriveSeed(master_seed, index, kMaskStream),
          DeriveSeed(master_seed, index, kSoftmaxStream)};
}

std::string ManifestJson(const DatasetSpec& spec) {
  return ManifestObject(spec).dump(2) + "\n";
}

void GenerateDataset(const DatasetSpec& spec, const fs::path& root, bool force) {
  std::error_code ec;
  bool created_root = false;
  if (fs::exists(root)) {
    if (!fs::is_directory(root)) {
      throw Error(ErrorCode::kIoFailure, root.string() + " is not a directory");
    }
    if (!fs::is_empty(root)) {
      if (!force) {
        throw Error(ErrorCode::kIoFailure,
                    root.string() + " is not empty (use --force to replace)");
      }
      for (const auto& entry : fs::directory_iterator(root)) {
        fs::remove_all(entry.path());
      }
    }
  } else if (!fs::create_directories(root, ec)) {
    throw Error(ErrorCode::kIoFailure,
                "cannot create " + root.string() + ": " + ec.message());
  } else {
    created_root = true;
  }

  const auto n = static_cast<std::ptrdiff_t>(spec.n_samples);
  std::vector<std::exception_ptr> failures(spec.n_samples);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto index = static_cast<std::size_t>(i);
    try {
      GenerateSample(spec, index, root / SampleDirName(index));
    } catch (...) {
      failures[index] = std::current_exception();
    }
  }
  for (const std::exception_ptr& failure : failures) {
    if (!failure) continue;
    if (created_root) {
      fs::remove_all(root, ec);
    } else {
      for (const auto& entry : fs::directory_iterator(root)) {
        fs::remove_all(entry.path(), ec);
      }
    }
    std::rethrow_exception(failure);
  }

  const std::string manifest = ManifestJson(spec);
  WriteFileBytes(std::span(reinterpret_cast<const std::uint8_t*>(manifest.data()),
                           manifest.size()),
                 root / kManifestFile);
}

Manifest ReadManifest(const fs::path& root) {
  const fs::path path = root / kManifestFile;
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "no manifest at " + path.string());
  }
  json j;
  try {
    in >> j;
    Manifest m;
    DatasetSpec& spec = m.spec;
    spec.n_samples = j.at("n_samples").get<std::size_t>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.connectivity = j.at("connectivity").get<int>() == 4
                            ? Connectivity::kFour
                            : Connectivity::kEight;
    spec.softmax_samples = j.value("softmax_samples", std::size_t{0});
    const json& s = j.at("scene");
    spec.scene.height = s.at("height").get<std::size_t>();
    spec.scene.width = s.at("width").get<std::size_t>();
    spec.scene.n_objects = s.at("n_objects").get<std::size_t>();
    spec.scene.ood_fraction = s.at("ood_fraction").get<double>();
    spec.scene.shapes.clear();
    for (const auto& name : s.at("shapes")) {
      spec.scene.shapes.push_back(ParseShape(name.get<std::string>()));
    }
    spec.scene.classes = s.at("classes").get<std::size_t>();
    spec.scene.stuff_classes = s.at("stuff_classes").get<std::size_t>();
    spec.scene.min_side = s.at("min_side").get<std::size_t>();
    spec.scene.max_side = s.at("max_side").get<std::size_t>();
    const json& nz = j.at("noise");
    spec.noise.boundary_noise = nz.at("boundary_noise").get<double>();
    spec.noise.background_noise = nz.at("background_noise").get<double>();
    spec.noise.ood_signal = nz.at("ood_signal").get<double>();
    spec.noise.in_dist_signal = nz.at("in_dist_signal").get<double>();
    spec.noise.sigma = nz.at("sigma").get<double>();
    const json& c = j.at("corruption");
    spec.corruption.erosion = c.at("erosion").get<std::size_t>();
    spec.corruption.dilation = c.at("dilation").get<std::size_t>();
    spec.corruption.drop_probability = c.at("drop_probability").get<double>();
    spec.corruption.ood_drop_probability =
        c.at("ood_drop_probability").get<double>();
    for (int v : j.at("ood_classes")) m.ood_classes.insert(static_cast<std::uint8_t>(v));
    for (int v : j.at("stuff_classes")) m.stuff_classes.insert(static_cast<std::uint8_t>(v));
    for (const auto& sample : j.at("samples")) {
      m.sample_dirs.push_back(sample.at("dir").get<std::string>());
    }
    if (m.sample_dirs.size() != spec.n_samples) {
      throw Error(ErrorCode::kInvalidArgument,
                  "manifest sample list disagrees with n_samples");
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                "malformed manifest " + path.string() + ": " + e.what());
  }
}

}  // namespace iaood
