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

#ifndef PANOPTIC_PANOPTIC_PNG_H_
#define PANOPTIC_PANOPTIC_PNG_H_

// Panoptic interchange encoding: an 8-bit RGB PNG whose pixels carry segment
// ids as id = R + 256 * G + 256^2 * B, plus a JSON sidecar (same path with a
// .json extension) describing each segment:
//
//   {"format": "panoptic-segments", "version": 1, "height": H, "width": W,
//    "segments": [{"id": 12, "class_id": 11, "is_thing": false,
//                  "instance": 0}, ...]}
//
// Id 0 is void. Stuff segments use id = class_id + 1; thing segments use
// id = class_id + 1000 * instance. Segments are listed in ascending id order.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "panoptic/class_config.h"
#include "panoptic/panoptic_map.h"

namespace panoptic {

inline constexpr std::uint32_t kMaxSegmentId = (1u << 24) - 1;

struct SegmentInfo {
  std::uint32_t id = 0;
  std::int32_t class_id = 0;
  bool is_thing = false;
  std::int32_t instance = 0;
  friend bool operator==(const SegmentInfo&, const SegmentInfo&) = default;
};

std::uint32_t SegmentIdFor(std::int32_t class_id, bool is_thing,
                           std::int32_t instance);
std::array<std::uint8_t, 3> SegmentIdToRgb(std::uint32_t id);
std::uint32_t RgbToSegmentId(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// In-memory 8-bit RGB PNG codec (rgb holds height * width * 3 bytes).
std::vector<std::uint8_t> EncodeRgbPng(std::span<const std::uint8_t> rgb,
                                       int height, int width);
std::vector<std::uint8_t> DecodeRgbPng(std::span<const std::uint8_t> png,
                                       int* height, int* width,
                                       const std::string& source);

struct EncodedPanoptic {
  std::vector<std::uint8_t> png;
  std::string manifest;  // sidecar JSON text
};

// Throws InvariantError for an invalid map and InputError when a segment id
// would exceed 2^24 - 1.
EncodedPanoptic EncodePanoptic(const PanopticMap& map, const ClassConfig& classes);
PanopticMap DecodePanoptic(const EncodedPanoptic& encoded,
                           const ClassConfig& classes, const std::string& source);

std::filesystem::path SidecarPath(const std::filesystem::path& png_path);

void WritePanopticPng(const std::filesystem::path& png_path,
                      const PanopticMap& map, const ClassConfig& classes);
PanopticMap ReadPanopticPng(const std::filesystem::path& png_path,
                            const ClassConfig& classes);

}  // namespace panoptic

#endif  // PANOPTIC_PANOPTIC_PNG_H_
