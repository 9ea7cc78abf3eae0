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

#ifndef PANOPTIC_SEMANTIC_H_
#define PANOPTIC_SEMANTIC_H_

// Inference-mode 2-way FPN and semantic head.
//
// Levels are indexed 0..3 for downsampling factors x4, x8, x16, x32.
//
// 2-way FPN, per level l:
//   top_down[3]  = lateral_td[3](C32)
//   top_down[l]  = lateral_td[l](C_l) + up2(top_down[l+1])
//   bottom_up[0] = lateral_bu[0](C4)
//   bottom_up[l] = lateral_bu[l](C_l) + down2(bottom_up[l-1])
//   P_l          = output[l](top_down[l] + bottom_up[l])
//
// Semantic head:
//   d32 = proj32(DPC(P32))      d16 = proj16(DPC(P16))     (256 -> 128)
//   l8  = LSFE(P8)              l4  = LSFE(P4)
//   a32 = d32
//   a16 = d16 + up(a32)                  plain alignment sum
//   a8  = l8  + MC16(a16)                MC between second DPC and LSFE
//   a4  = l4  + MC8(a8)                  MC between the two LSFEs
//   concat[a4, up(a8), up(a16), up(a32)] at x4 scale -> 512 channels
//   1x1 conv -> n_classes, 4x bilinear upsample, channel softmax.
//
// All resampling is bilinear (half-pixel centers) to the target level's dims.

#include <array>
#include <cstdint>

#include "panoptic/blocks.h"
#include "panoptic/tensor.h"

namespace panoptic {

inline constexpr int kNumLevels = 4;
inline constexpr int kHeadConcatChannels = 4 * kLsfeChannels;

struct EncoderFeatures {
  std::array<Tensor, kNumLevels> levels;  // x4, x8, x16, x32
};

struct PyramidFeatures {
  std::array<Tensor, kNumLevels> levels;  // P4, P8, P16, P32
};

// Throws ShapeError unless spatial dims halve exactly level to level and the
// batch sizes agree, InputError for a non-finite value.
void ValidateEncoderFeatures(const EncoderFeatures& feats);

// Deterministic stand-in for the encoder: uniform values in [-1, 1] at
// input/4 ... input/32. `input_h` and `input_w` must be multiples of 32.
EncoderFeatures StubEncoder(int input_h, int input_w,
                            std::array<int, kNumLevels> channels,
                            std::uint64_t seed, int batch = 1);

inline constexpr std::array<int, kNumLevels> kDefaultEncoderChannels{40, 64,
                                                                     176, 2048};

struct FpnWeights {
  std::array<BlockWeights, kNumLevels> top_down_lateral;
  std::array<BlockWeights, kNumLevels> bottom_up_lateral;
  std::array<BlockWeights, kNumLevels> output;
};

struct FpnTrace {
  std::array<Tensor, kNumLevels> top_down;
  std::array<Tensor, kNumLevels> bottom_up;
  std::array<Tensor, kNumLevels> sums;
};

PyramidFeatures TwoWayFpnForward(const EncoderFeatures& feats,
                                 const FpnWeights& w,
                                 FpnTrace* trace = nullptr);

struct SemanticHeadWeights {
  BlockWeights dpc32;
  BlockWeights dpc16;
  ConvLayer proj32;  // 1x1, 256 -> 128
  ConvLayer proj16;
  BlockWeights lsfe8;
  BlockWeights lsfe4;
  BlockWeights mc16;  // second DPC -> LSFE connection
  BlockWeights mc8;   // LSFE -> LSFE connection
  ConvLayer classifier;  // 1x1, 512 -> n_classes, biased, no norm
};

struct SemanticHeadTrace {
  DpcTrace dpc32;
  DpcTrace dpc16;
  std::array<Tensor, kNumLevels> aligned;  // a4, a8, a16, a32
  Tensor concat;                           // 512 channels at x4
};

struct SemanticOutput {
  Tensor logits;         // pre-softmax, full resolution
  Tensor probabilities;  // channel softmax of `logits`
};

SemanticOutput SemanticHeadForward(const PyramidFeatures& p,
                                   const SemanticHeadWeights& w, int n_classes,
                                   SemanticHeadTrace* trace = nullptr);

struct NetworkWeights {
  std::array<int, kNumLevels> encoder_channels = kDefaultEncoderChannels;
  int n_classes = 2;
  FpnWeights fpn;
  SemanticHeadWeights head;
};

NetworkWeights RandomNetworkWeights(std::array<int, kNumLevels> encoder_channels,
                                    int n_classes, std::uint64_t seed);

// Checks every block against the channel counts the pipeline feeds it.
void ValidateNetworkWeights(const NetworkWeights& w);

}  // namespace panoptic

#endif  // PANOPTIC_SEMANTIC_H_
