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

#include "iaood/tensor_io.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace iaood {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'I', 'A', 'T', '1'};
constexpr std::size_t kFixedHeaderBytes = 6;

std::size_t DTypeSize(DType dtype) {
  switch (dtype) {
    case DType::kU8: return 1;
    case DType::kU16: return 2;
    case DType::kF32: return 4;
  }
  return 0;
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

std::uint32_t GetU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::vector<std::uint8_t> EncodeHeader(DType dtype,
                                       std::initializer_list<std::size_t> dims,
                                       std::size_t payload_bytes) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.reserve(kFixedHeaderBytes + 4 * dims.size() + payload_bytes);
  out.push_back(static_cast<std::uint8_t>(dtype));
  out.push_back(static_cast<std::uint8_t>(dims.size()));
  for (std::size_t d : dims) {
    if (d == 0 || d > std::numeric_limits<std::uint32_t>::max()) {
      throw Error(ErrorCode::kInvalidDims,
                  "every dim must be in [1, 2^32), got " + std::to_string(d));
    }
    PutU32(out, static_cast<std::uint32_t>(d));
  }
  return out;
}

void PutPayload(std::vector<std::uint8_t>& out, std::span<const std::uint8_t> v) {
  out.insert(out.end(), v.begin(), v.end());
}

void PutPayload(std::vector<std::uint8_t>& out,
                std::span<const std::uint16_t> v) {
  for (std::uint16_t x : v) {
    out.push_back(static_cast<std::uint8_t>(x));
    out.push_back(static_cast<std::uint8_t>(x >> 8));
  }
}

void PutPayload(std::vector<std::uint8_t>& out, std::span<const float> v) {
  for (float x : v) PutU32(out, std::bit_cast<std::uint32_t>(x));
}

template <typename T>
std::vector<T> GetPayload(const std::uint8_t* p, std::size_t count) {
  std::vector<T> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    if constexpr (std::is_same_v<T, std::uint8_t>) {
      out[i] = p[i];
    } else if constexpr (std::is_same_v<T, std::uint16_t>) {
      out[i] = static_cast<std::uint16_t>(p[2 * i] | (p[2 * i + 1] << 8));
    } else {
      out[i] = std::bit_cast<float>(GetU32(p + 4 * i));
    }
  }
  return out;
}

template <typename T>
T As(AnyTensor tensor, const std::filesystem::path& path, const char* role) {
  if (auto* v = std::get_if<T>(&tensor)) return std::move(*v);
  throw Error(ErrorCode::kDtypeMismatch,
              path.string() + " does not hold a " + role);
}

}  // namespace

std::vector<std::uint8_t> EncodeTensor(const ErrorMap& grid) {
  auto out = EncodeHeader(DType::kF32, {grid.height(), grid.width()},
                          grid.size() * 4);
  PutPayload(out, grid.values());
  return out;
}

std::vector<std::uint8_t> EncodeTensor(const SoftmaxStack& stack) {
  auto out =
      EncodeHeader(DType::kF32, {stack.classes(), stack.height(), stack.width()},
                   stack.values().size() * 4);
  PutPayload(out, stack.values());
  return out;
}

std::vector<std::uint8_t> EncodeTensor(const InstanceLabelMap& grid) {
  auto out = EncodeHeader(DType::kU16, {grid.height(), grid.width()},
                          grid.size() * 2);
  PutPayload(out, grid.values());
  return out;
}

std::vector<std::uint8_t> EncodeTensor(const SemanticLabelMap& grid) {
  auto out =
      EncodeHeader(DType::kU8, {grid.height(), grid.width()}, grid.size());
  PutPayload(out, grid.values());
  return out;
}

TensorHeader DecodeHeader(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) {
    throw Error(ErrorCode::kTruncatedFile, "shorter than the magic");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::kBadMagic, "expected \"IAT1\"");
  }
  if (bytes.size() < kFixedHeaderBytes) {
    throw Error(ErrorCode::kTruncatedFile, "header cut short");
  }
  TensorHeader header;
  const std::uint8_t code = bytes[4];
  if (code < 1 || code > 3) {
    throw Error(ErrorCode::kDtypeMismatch,
                "unknown dtype code " + std::to_string(code));
  }
  header.dtype = static_cast<DType>(code);
  const std::size_t ndim = bytes[5];
  if (ndim != 2 && ndim != 3) {
    throw Error(ErrorCode::kInvalidDims,
                "ndim must be 2 or 3, got " + std::to_string(ndim));
  }
  if (bytes.size() < kFixedHeaderBytes + 4 * ndim) {
    throw Error(ErrorCode::kTruncatedFile, "dims cut short");
  }
  for (std::size_t i = 0; i < ndim; ++i) {
    const std::uint32_t d = GetU32(bytes.data() + kFixedHeaderBytes + 4 * i);
    if (d == 0) throw Error(ErrorCode::kInvalidDims, "zero-sized dim");
    header.dims.push_back(d);
  }
  return header;
}

AnyTensor DecodeTensor(std::span<const std::uint8_t> bytes) {
  const TensorHeader header = DecodeHeader(bytes);
  const std::size_t header_bytes = kFixedHeaderBytes + 4 * header.dims.size();
  std::size_t count = 1;
  for (std::uint32_t d : header.dims) count *= d;
  const std::size_t expected = header_bytes + count * DTypeSize(header.dtype);
  if (bytes.size() < expected) {
    throw Error(ErrorCode::kTruncatedFile,
                "payload has " + std::to_string(bytes.size() - header_bytes) +
                    " bytes, header promises " +
                    std::to_string(expected - header_bytes));
  }
  if (bytes.size() > expected) {
    throw Error(ErrorCode::kTrailingBytes,
                std::to_string(bytes.size() - expected) +
                    " bytes past the payload");
  }
  const std::uint8_t* payload = bytes.data() + header_bytes;
  const auto& d = header.dims;
  if (d.size() == 3) {
    if (header.dtype != DType::kF32) {
      throw Error(ErrorCode::kDtypeMismatch,
                  "3-d tensors are only valid as f32 softmax stacks");
    }
    return SoftmaxStack(d[0], d[1], d[2], GetPayload<float>(payload, count));
  }
  switch (header.dtype) {
    case DType::kU8:
      return SemanticLabelMap(d[0], d[1],
                              GetPayload<std::uint8_t>(payload, count));
    case DType::kU16:
      return InstanceLabelMap(d[0], d[1],
                              GetPayload<std::uint16_t>(payload, count));
    case DType::kF32:
      return ErrorMap(d[0], d[1], GetPayload<float>(payload, count));
  }
  throw Error(ErrorCode::kDtypeMismatch, "unreachable dtype");
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorCode::kIoFailure, "read failed on " + path.string());
  }
  return bytes;
}

void WriteFileBytes(std::span<const std::uint8_t> bytes,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed on " + path.string());
}

AnyTensor ReadTensor(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  try {
    return DecodeTensor(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

ErrorMap ReadErrorMap(const std::filesystem::path& path) {
  return As<ErrorMap>(ReadTensor(path), path, "f32 error map");
}
SoftmaxStack ReadSoftmaxStack(const std::filesystem::path& path) {
  return As<SoftmaxStack>(ReadTensor(path), path, "f32 softmax stack");
}
InstanceLabelMap ReadInstanceMap(const std::filesystem::path& path) {
  return As<InstanceLabelMap>(ReadTensor(path), path, "u16 instance map");
}
SemanticLabelMap ReadSemanticMap(const std::filesystem::path& path) {
  return As<SemanticLabelMap>(ReadTensor(path), path, "u8 semantic map");
}

void WriteTensor(const ErrorMap& grid, const std::filesystem::path& path) {
  WriteFileBytes(EncodeTensor(grid), path);
}
void WriteTensor(const SoftmaxStack& stack, const std::filesystem::path& path) {
  WriteFileBytes(EncodeTensor(stack), path);
}
void WriteTensor(const InstanceLabelMap& grid,
                 const std::filesystem::path& path) {
  WriteFileBytes(EncodeTensor(grid), path);
}
void WriteTensor(const SemanticLabelMap& grid,
                 const std::filesystem::path& path) {
  WriteFileBytes(EncodeTensor(grid), path);
}

}  // namespace iaood
