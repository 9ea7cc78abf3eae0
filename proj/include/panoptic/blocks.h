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

#ifndef PANOPTIC_BLOCKS_H_
#define PANOPTIC_BLOCKS_H_

// Inference-mode network blocks of the semantic pipeline. Every convolution
// is followed by a folded normalization (per-channel affine) and a leaky ReLU
// with slope 0.01, except where a layer carries no scale/shift.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panoptic/tensor.h"

namespace panoptic {

inline constexpr float kLeakySlope = 0.01f;
inline constexpr int kLsfeChannels = 128;
inline constexpr int kMcChannels = 128;
inline constexpr int kDpcChannels = 256;
inline constexpr int kDpcBranches = 5;
inline constexpr int kFpnChannels = 256;

// A standard or depthwise separable convolution plus its folded norm.
struct ConvLayer {
  // Standard: (out, in / groups, kh, kw). Separable: depthwise (in, 1, kh, kw).
  Tensor weights;
  // Separable only: pointwise (out, in, 1, 1).
  std::optional<Tensor> pointwise;
  std::vector<float> bias;
  // Empty when the layer has no normalization.
  std::vector<float> scale;
  std::vector<float> shift;

  bool separable() const { return pointwise.has_value(); }
  int in_channels() const;
  int out_channels() const;
};

// conv -> affine_norm (when present) -> leaky_relu (when `activate`).
Tensor ApplyConvLayer(const Tensor& input, const ConvLayer& layer,
                      const ConvSpec& geometry, bool activate = true);

enum class BlockKind { kLsfe, kDpc, kMc, kFpnLateral, kFpnOutput };

std::string_view BlockKindName(BlockKind kind);

struct BlockWeights {
  BlockKind kind = BlockKind::kLsfe;
  std::map<std::string, ConvLayer, std::less<>> layers;

  // Throws InputError when the layer is missing.
  const ConvLayer& layer(std::string_view name) const;
};

// Layer identifiers a block kind demands, in forward order.
std::span<const std::string_view> RequiredLayers(BlockKind kind);

// Convolution geometry of one layer of a block. The bias flag is filled in
// from the layer itself by ApplyConvLayer.
ConvSpec LayerGeometry(BlockKind kind, std::string_view layer);

// Checks presence, kind (standard/separable) and channel chaining of every
// layer against `in_channels`. Throws ShapeError/InputError.
void ValidateBlock(const BlockWeights& w, int in_channels);

// Two 3x3 separable convs with 128 filters.
Tensor LsfeForward(const Tensor& input, const BlockWeights& w);

// Intermediate tensors of a DPC evaluation, for inspection.
struct DpcTrace {
  Tensor initial;
  Tensor concat;  // 1280 channels
};

// Initial 3x3 separable conv with dilation (1,6); branches at (1,1), (6,21),
// (18,15) fed by it; a (6,3) branch fed by the (18,15) branch; the five
// 256-channel outputs concatenated and projected 1x1 to 256 channels.
Tensor DpcForward(const Tensor& input, const BlockWeights& w,
                  DpcTrace* trace = nullptr);

// Two cascaded 3x3 separable convs with 128 filters, then 2x bilinear
// upsampling.
Tensor McForward(const Tensor& input, const BlockWeights& w);

// 1x1 conv to 256 channels.
Tensor FpnLateralForward(const Tensor& input, const BlockWeights& w);

// 3x3 separable conv with 256 channels.
Tensor FpnOutputForward(const Tensor& input, const BlockWeights& w);

// Seeded pseudo-random layer: weights uniform in +-1/sqrt(fan_in), norm scale
// in [0.5, 1.5], shift in [-0.1, 0.1].
ConvLayer RandomConvLayer(int in_channels, int out_channels, KernelSize kernel,
                          bool separable, bool bias, bool norm,
                          std::uint64_t seed);

BlockWeights RandomBlockWeights(BlockKind kind, int in_channels,
                                std::uint64_t seed);

}  // namespace panoptic

#endif  // PANOPTIC_BLOCKS_H_
