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

#ifndef PANOPTIC_PARAM_COUNT_H_
#define PANOPTIC_PARAM_COUNT_H_

// Exact parameter accounting for layer lists.
//
// Network description format, version 1 (one directive per line, '#' starts
// a comment):
//
//   version 1
//   layer <name> kind=<standard|separable> kernel=<kh>x<kw> in=<C> out=<C>
//         [groups=<g>] [bias=<0|1>] [norm=<0|1>]
//
// (the layer directive is a single line). Standard convolutions hold
// kh*kw*(in/groups)*out weights, separable ones kh*kw*in + in*out; a bias adds
// `out`. Normalization parameters (2*out per normalized layer) are reported
// separately and are not part of the total.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panoptic/blocks.h"
#include "panoptic/tensor.h"

namespace panoptic {

enum class LayerKind { kStandard, kSeparable };

std::string_view LayerKindName(LayerKind kind);

struct LayerDesc {
  std::string name;
  LayerKind kind = LayerKind::kStandard;
  KernelSize kernel{1, 1};
  int in_channels = 1;
  int out_channels = 1;
  int groups = 1;
  bool bias = false;
  bool norm = false;
  int line = 0;  // source line, 0 when built in code
};

struct LayerCount {
  std::string name;
  LayerKind kind;
  std::int64_t conv_params;
  std::int64_t norm_params;
};

struct ParamCountReport {
  std::vector<LayerCount> layers;
  std::int64_t total = 0;           // convolution weights and biases
  std::int64_t standard_total = 0;  // part of `total` in standard layers
  std::int64_t separable_total = 0; // part of `total` in separable layers
  std::int64_t norm_total = 0;      // affine scale/shift, not in `total`
};

std::int64_t ConvParams(const LayerDesc& layer);
ParamCountReport CountParams(std::span<const LayerDesc> layers);

// The same layers with every separable convolution replaced by a standard one.
std::vector<LayerDesc> AsStandard(std::span<const LayerDesc> layers);

// Parses the text format above. Errors carry "<source>:<line>:".
std::vector<LayerDesc> ParseNetworkDescription(std::string_view text,
                                               const std::string& source);
std::vector<LayerDesc> LoadNetworkDescription(const std::string& path);

// Layer list of a block's weights, named "<prefix><layer>".
std::vector<LayerDesc> DescribeBlock(const BlockWeights& w,
                                     const std::string& prefix = "");

}  // namespace panoptic

#endif  // PANOPTIC_PARAM_COUNT_H_
