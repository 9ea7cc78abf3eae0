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

#ifndef PANOPTIC_PTSR_H_
#define PANOPTIC_PTSR_H_

// PTSR tensor container:
//   bytes 0..3   magic "PTSR"
//   byte  4      version (1)
//   bytes 5..20  n, c, h, w as little-endian u32
//   then n*c*h*w little-endian IEEE-754 binary32 values, width fastest.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "panoptic/tensor.h"

namespace panoptic {

inline constexpr std::uint8_t kPtsrVersion = 1;
inline constexpr std::size_t kPtsrHeaderSize = 21;

std::vector<std::uint8_t> EncodePtsr(const Tensor& tensor);

// `source` names the payload in error messages.
Tensor DecodePtsr(std::span<const std::uint8_t> bytes,
                  const std::string& source = "<memory>");

void WritePtsr(const std::filesystem::path& path, const Tensor& tensor);
Tensor ReadPtsr(const std::filesystem::path& path);

}  // namespace panoptic

#endif  // PANOPTIC_PTSR_H_
