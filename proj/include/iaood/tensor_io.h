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

#ifndef IAOOD_TENSOR_IO_H_
#define IAOOD_TENSOR_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "iaood/grid.h"

namespace iaood {

// IAT1 raw container:
//   bytes 0-3   magic "IAT1"
//   byte  4     dtype code (1 = u8, 2 = u16, 3 = f32), little-endian payload
//   byte  5     ndim (2, or 3 for f32 softmax stacks only)
//   bytes 6..   ndim x u32 LE dims, row-major order (C,)H,W
//   then the row-major payload.
enum class DType : std::uint8_t { kU8 = 1, kU16 = 2, kF32 = 3 };

struct TensorHeader {
  DType dtype = DType::kU8;
  std::vector<std::uint32_t> dims;
};

using AnyTensor =
    std::variant<ErrorMap, SoftmaxStack, InstanceLabelMap, SemanticLabelMap>;

// Encoding to / from an in-memory byte buffer. The file functions below are
// thin wrappers over these.
std::vector<std::uint8_t> EncodeTensor(const ErrorMap& grid);
std::vector<std::uint8_t> EncodeTensor(const SoftmaxStack& stack);
std::vector<std::uint8_t> EncodeTensor(const InstanceLabelMap& grid);
std::vector<std::uint8_t> EncodeTensor(const SemanticLabelMap& grid);
AnyTensor DecodeTensor(std::span<const std::uint8_t> bytes);
TensorHeader DecodeHeader(std::span<const std::uint8_t> bytes);

AnyTensor ReadTensor(const std::filesystem::path& path);

// Typed reads; kDtypeMismatch when the file holds a different role.
ErrorMap ReadErrorMap(const std::filesystem::path& path);
SoftmaxStack ReadSoftmaxStack(const std::filesystem::path& path);
InstanceLabelMap ReadInstanceMap(const std::filesystem::path& path);
SemanticLabelMap ReadSemanticMap(const std::filesystem::path& path);

void WriteTensor(const ErrorMap& grid, const std::filesystem::path& path);
void WriteTensor(const SoftmaxStack& stack, const std::filesystem::path& path);
void WriteTensor(const InstanceLabelMap& grid,
                 const std::filesystem::path& path);
void WriteTensor(const SemanticLabelMap& grid,
                 const std::filesystem::path& path);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(std::span<const std::uint8_t> bytes,
                    const std::filesystem::path& path);

}  // namespace iaood

#endif  // IAOOD_TENSOR_IO_H_
