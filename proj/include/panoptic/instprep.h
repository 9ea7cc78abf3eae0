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

#ifndef PANOPTIC_INSTPREP_H_
#define PANOPTIC_INSTPREP_H_

// Instance post-processing ahead of fusion: mask pasting, confidence
// filtering, overlap suppression and the box-restricted semantic logits.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "panoptic/class_config.h"
#include "panoptic/tensor.h"

namespace panoptic {

inline constexpr int kMaskSize = 28;

// Corner box in pixel coordinates; x2 > x1, y2 > y1.
struct Box {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
};

// Rounded, clamped box covering columns [x1, x2) and rows [y1, y2).
struct PixelBox {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  int width() const { return x2 - x1; }
  int height() const { return y2 - y1; }
  bool contains(int y, int x) const { return y >= y1 && y < y2 && x >= x1 && x < x2; }
};

struct InstancePrediction {
  std::int32_t class_id = 0;
  double score = 0.0;
  Box bbox;
  Tensor mask_logits;  // 1 x 1 x M x M, normally 28 x 28
};

struct FusionConfig {
  double confidence_threshold = 0.5;
  double overlap_threshold = 0.5;
  std::int64_t min_stuff_area = 2048;

  // Throws InputError unless both thresholds lie in [0, 1] and the area is
  // non-negative.
  void Validate() const;
};

// Rounds half away from zero, then clamps to the image. Throws InputError
// when a side of the result is one pixel or less.
PixelBox ToPixelBox(const Box& box, int image_h, int image_w);

// Bilinearly resizes the mask logits to the box and places them on a zero
// canvas of 1 x 1 x image_h x image_w.
Tensor PasteMaskLogits(const InstancePrediction& inst, int image_h, int image_w);

// Drops instances scoring below the confidence threshold and stable-sorts
// the rest by descending score.
std::vector<InstancePrediction> FilterAndSort(std::vector<InstancePrediction> instances,
                                              const FusionConfig& cfg);

struct PastedInstance {
  InstancePrediction prediction;
  Tensor logits;  // pasted mask logits at image resolution
};

struct SuppressionDecision {
  std::size_t index = 0;      // position in the input list
  std::int64_t area = 0;      // pixels of the candidate's binary mask
  std::int64_t overlap = 0;   // of those, pixels already claimed
  bool retained = false;
};

// Greedy scan in score order. A candidate's binary mask (sigmoid > 0.5) is
// compared with the union of the binary masks retained so far, and the
// candidate is discarded iff |mask & union| / |mask| > overlap_threshold. An
// empty mask has ratio 0. Input must be sorted by descending score.
std::vector<PastedInstance> SuppressOverlaps(
    std::vector<PastedInstance> sorted, const FusionConfig& cfg,
    std::vector<SuppressionDecision>* decisions = nullptr);

// Binary mask of pasted logits: sigmoid(x) > 0.5, i.e. x > 0.
std::vector<std::uint8_t> BinaryMask(const Tensor& logits);

// The semantic channel of the instance's class inside its box, 0 elsewhere.
// `semantic_logits` is 1 x N x H x W with channels in class-table order.
Tensor BuildMlb(const Tensor& semantic_logits, const InstancePrediction& inst,
                const ClassConfig& classes);

// Instance manifest, version 1. Paths are relative to the manifest:
//
//   {"format": "panoptic-instances", "version": 1,
//    "images": [{"name": "img000", "semantic": "img000.semantic.ptsr",
//                "instances": [{"class_id": 13, "score": 0.93,
//                               "bbox": [x1, y1, x2, y2],
//                               "mask": "masks/img000_00.ptsr"}]}]}
struct ImageRecord {
  std::string name;
  std::filesystem::path semantic;  // resolved path
  std::vector<InstancePrediction> instances;
};

// Loads the manifest and every mask it references. Throws FormatError naming
// the offending file, InputError for an instance of a non-thing class.
std::vector<ImageRecord> LoadInstanceManifest(const std::filesystem::path& path,
                                              const ClassConfig& classes);

// Writes the manifest plus mask files under `dir`/masks/. Semantic paths are
// stored relative to `dir`.
void WriteInstanceManifest(const std::filesystem::path& dir,
                           const std::string& manifest_name,
                           const std::vector<ImageRecord>& images);

}  // namespace panoptic

#endif  // PANOPTIC_INSTPREP_H_
