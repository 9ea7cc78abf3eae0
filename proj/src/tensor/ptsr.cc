// Copyright 2026 The Panoptic Fusion Kit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "panoptic/ptsr.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "panoptic/errors.h"

namespace panoptic {
namespace {

constexpr char kMagic[4] = {'P', 'T', 'S', 'R'};

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t GetU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 |
         static_cast<std::uint32_t>(p[3]) << 24;
}

}  // namespace

std::vector<std::uint8_t> EncodePtsr(const Tensor& tensor) {
  std::vector<std::uint8_t> out;
  out.reserve(kPtsrHeaderSize + tensor.size() * 4);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kPtsrVersion);
  const Dims& d = tensor.dims();
  for (int v : {d.n, d.c, d.h, d.w}) PutU32(out, static_cast<std::uint32_t>(v));
  for (float f : tensor.data()) PutU32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

Tensor DecodePtsr(std::span<const std::uint8_t> bytes, const std::string& source) {
  if (bytes.size() < kPtsrHeaderSize ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError(source, "not a PTSR tensor (bad magic or short header)");
  }
  if (bytes[4] != kPtsrVersion) {
    throw FormatError(source, "unsupported PTSR version " + std::to_string(bytes[4]));
  }
  std::uint32_t raw[4];
  for (int i = 0; i < 4; ++i) raw[i] = GetU32(bytes.data() + 5 + 4 * i);
  std::uint64_t count = 1;
  for (std::uint32_t v : raw) {
    if (v == 0 || v > 0x7fffffffu) {
      throw FormatError(source, "PTSR dimension out of range: " + std::to_string(v));
    }
    count *= v;
    if (count > (bytes.size() - kPtsrHeaderSize) / 4 + 1) {
      throw FormatError(source, "PTSR payload shorter than its dims");
    }
  }
  if (bytes.size() != kPtsrHeaderSize + count * 4) {
    throw FormatError(source, "PTSR payload is " +
                                  std::to_string(bytes.size() - kPtsrHeaderSize) +
                                  " bytes, dims need " + std::to_string(count * 4));
  }
  std::vector<float> values(count);
  const std::uint8_t* p = bytes.data() + kPtsrHeaderSize;
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<float>(GetU32(p + 4 * i));
  }
  const Dims dims{static_cast<int>(raw[0]), static_cast<int>(raw[1]),
                  static_cast<int>(raw[2]), static_cast<int>(raw[3])};
  try {
    return Tensor(dims, std::move(values));
  } catch (const InputError& e) {
    throw FormatError(source, e.what());
  }
}

void WritePtsr(const std::filesystem::path& path, const Tensor& tensor) {
  const auto bytes = EncodePtsr(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(path.string(), "cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError(path.string(), "write failed");
}

Tensor ReadPtsr(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string(), "cannot open for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return DecodePtsr(bytes, path.string());
}

}  // namespace panoptic
