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

#include "panoptic/blocks.h"

#include <array>
#include <cmath>
#include <string>

#include "panoptic/errors.h"
#include "panoptic/rng.h"

namespace panoptic {
namespace {

struct LayerPlan {
  std::string_view name;
  bool separable;
  KernelSize kernel;
  Dilation dilation;
  int in_channels;  // 0: the block input
  int out_channels;
};

constexpr std::array<LayerPlan, 2> kLsfePlan{{
    {"conv1", true, {3, 3}, {1, 1}, 0, kLsfeChannels},
    {"conv2", true, {3, 3}, {1, 1}, kLsfeChannels, kLsfeChannels},
}};

constexpr std::array<LayerPlan, 6> kDpcPlan{{
    {"initial", true, {3, 3}, {1, 6}, 0, kDpcChannels},
    {"rate_1_1", true, {3, 3}, {1, 1}, kDpcChannels, kDpcChannels},
    {"rate_6_21", true, {3, 3}, {6, 21}, kDpcChannels, kDpcChannels},
    {"rate_18_15", true, {3, 3}, {18, 15}, kDpcChannels, kDpcChannels},
    {"rate_6_3", true, {3, 3}, {6, 3}, kDpcChannels, kDpcChannels},
    {"project", false, {1, 1}, {1, 1}, kDpcBranches * kDpcChannels,
     kDpcChannels},
}};

constexpr std::array<LayerPlan, 2> kMcPlan{{
    {"conv1", true, {3, 3}, {1, 1}, kMcChannels, kMcChannels},
    {"conv2", true, {3, 3}, {1, 1}, kMcChannels, kMcChannels},
}};

constexpr std::array<LayerPlan, 1> kLateralPlan{{
    {"conv", false, {1, 1}, {1, 1}, 0, kFpnChannels},
}};

constexpr std::array<LayerPlan, 1> kOutputPlan{{
    {"conv", true, {3, 3}, {1, 1}, kFpnChannels, kFpnChannels},
}};

std::span<const LayerPlan> Plan(BlockKind kind) {
  switch (kind) {
    case BlockKind::kLsfe:
      return kLsfePlan;
    case BlockKind::kDpc:
      return kDpcPlan;
    case BlockKind::kMc:
      return kMcPlan;
    case BlockKind::kFpnLateral:
      return kLateralPlan;
    case BlockKind::kFpnOutput:
      return kOutputPlan;
  }
  throw InputError("unknown block kind");
}

const LayerPlan& FindPlan(BlockKind kind, std::string_view name) {
  for (const LayerPlan& p : Plan(kind)) {
    if (p.name == name) return p;
  }
  throw InputError("block " + std::string(BlockKindName(kind)) +
                   " has no layer '" + std::string(name) + "'");
}

template <std::size_t N>
std::array<std::string_view, N> Names(const std::array<LayerPlan, N>& plan) {
  std::array<std::string_view, N> names{};
  for (std::size_t i = 0; i < N; ++i) names[i] = plan[i].name;
  return names;
}

Tensor Run(const Tensor& x, const BlockWeights& w, std::string_view name) {
  return ApplyConvLayer(x, w.layer(name), LayerGeometry(w.kind, name));
}

void RequireKind(const BlockWeights& w, BlockKind kind) {
  if (w.kind != kind) {
    throw InputError("expected " + std::string(BlockKindName(kind)) +
                     " weights, got " + std::string(BlockKindName(w.kind)));
  }
}

}  // namespace

int ConvLayer::in_channels() const {
  return separable() ? weights.n() : weights.c();
}

int ConvLayer::out_channels() const {
  return separable() ? pointwise->n() : weights.n();
}

Tensor ApplyConvLayer(const Tensor& input, const ConvLayer& layer,
                      const ConvSpec& geometry, bool activate) {
  ConvSpec spec = geometry;
  spec.bias = !layer.bias.empty();
  Tensor out = layer.separable()
                   ? DepthwiseSeparableConv(input, layer.weights,
                                            *layer.pointwise, spec, layer.bias)
                   : Conv2d(input, layer.weights, spec, layer.bias);
  if (!layer.scale.empty() || !layer.shift.empty()) {
    out = AffineNorm(out, layer.scale, layer.shift);
  }
  if (activate) out = Activate(out, Activation::LeakyRelu(kLeakySlope));
  return out;
}

std::string_view BlockKindName(BlockKind kind) {
  switch (kind) {
    case BlockKind::kLsfe:
      return "lsfe";
    case BlockKind::kDpc:
      return "dpc";
    case BlockKind::kMc:
      return "mc";
    case BlockKind::kFpnLateral:
      return "fpn_lateral";
    case BlockKind::kFpnOutput:
      return "fpn_output";
  }
  return "unknown";
}

const ConvLayer& BlockWeights::layer(std::string_view name) const {
  auto it = layers.find(name);
  if (it == layers.end()) {
    throw InputError(std::string(BlockKindName(kind)) + " weights lack layer '" +
                     std::string(name) + "'");
  }
  return it->second;
}

std::span<const std::string_view> RequiredLayers(BlockKind kind) {
  static const auto lsfe = Names(kLsfePlan);
  static const auto dpc = Names(kDpcPlan);
  static const auto mc = Names(kMcPlan);
  static const auto lateral = Names(kLateralPlan);
  static const auto output = Names(kOutputPlan);
  switch (kind) {
    case BlockKind::kLsfe:
      return lsfe;
    case BlockKind::kDpc:
      return dpc;
    case BlockKind::kMc:
      return mc;
    case BlockKind::kFpnLateral:
      return lateral;
    case BlockKind::kFpnOutput:
      return output;
  }
  return {};
}

ConvSpec LayerGeometry(BlockKind kind, std::string_view layer) {
  const LayerPlan& p = FindPlan(kind, layer);
  ConvSpec spec;
  spec.kernel = p.kernel;
  spec.dilation = p.dilation;
  return spec;
}

void ValidateBlock(const BlockWeights& w, int in_channels) {
  for (const LayerPlan& p : Plan(w.kind)) {
    const ConvLayer& layer = w.layer(p.name);
    const std::string where =
        std::string(BlockKindName(w.kind)) + "." + std::string(p.name);
    if (layer.separable() != p.separable) {
      throw InputError(where + (p.separable ? " must be depthwise separable"
                                            : " must be a standard convolution"));
    }
    const int expected_in = p.in_channels == 0 ? in_channels : p.in_channels;
    const Dims expected_w =
        p.separable ? Dims{expected_in, 1, p.kernel.h, p.kernel.w}
                    : Dims{p.out_channels, expected_in, p.kernel.h, p.kernel.w};
    RequireSameDims(layer.weights.dims(), expected_w, where.c_str());
    if (p.separable) {
      RequireSameDims(layer.pointwise->dims(),
                      Dims{p.out_channels, expected_in, 1, 1}, where.c_str());
    }
    const auto out = static_cast<std::size_t>(p.out_channels);
    if ((!layer.bias.empty() && layer.bias.size() != out) ||
        layer.scale.size() != layer.shift.size() ||
        (!layer.scale.empty() && layer.scale.size() != out)) {
      throw ShapeError(where + ": bias/scale/shift lengths do not match " +
                       std::to_string(out) + " output channels");
    }
  }
}

Tensor LsfeForward(const Tensor& input, const BlockWeights& w) {
  RequireKind(w, BlockKind::kLsfe);
  return Run(Run(input, w, "conv1"), w, "conv2");
}

Tensor DpcForward(const Tensor& input, const BlockWeights& w, DpcTrace* trace) {
  RequireKind(w, BlockKind::kDpc);
  Tensor initial = Run(input, w, "initial");
  Tensor r1 = Run(initial, w, "rate_1_1");
  Tensor r6_21 = Run(initial, w, "rate_6_21");
  Tensor r18_15 = Run(initial, w, "rate_18_15");
  Tensor r6_3 = Run(r18_15, w, "rate_6_3");
  const std::array<Tensor, kDpcBranches> branches{initial, r1, r6_21, r18_15,
                                                  r6_3};
  Tensor concat = ConcatChannels(branches);
  Tensor out = Run(concat, w, "project");
  if (trace != nullptr) {
    trace->initial = std::move(initial);
    trace->concat = std::move(concat);
  }
  return out;
}

Tensor McForward(const Tensor& input, const BlockWeights& w) {
  RequireKind(w, BlockKind::kMc);
  Tensor x = Run(Run(input, w, "conv1"), w, "conv2");
  return BilinearResize(x, 2 * x.h(), 2 * x.w());
}

Tensor FpnLateralForward(const Tensor& input, const BlockWeights& w) {
  RequireKind(w, BlockKind::kFpnLateral);
  return Run(input, w, "conv");
}

Tensor FpnOutputForward(const Tensor& input, const BlockWeights& w) {
  RequireKind(w, BlockKind::kFpnOutput);
  return Run(input, w, "conv");
}

ConvLayer RandomConvLayer(int in_channels, int out_channels, KernelSize kernel,
                          bool separable, bool bias, bool norm,
                          std::uint64_t seed) {
  Rng rng(seed);
  auto fill = [&rng](Dims dims, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::vector<float> v(dims.size());
    for (float& x : v) x = static_cast<float>(rng.Uniform(-bound, bound));
    return Tensor(dims, std::move(v));
  };
  ConvLayer layer;
  if (separable) {
    layer.weights = fill({in_channels, 1, kernel.h, kernel.w}, kernel.h * kernel.w);
    layer.pointwise = fill({out_channels, in_channels, 1, 1}, in_channels);
  } else {
    layer.weights = fill({out_channels, in_channels, kernel.h, kernel.w},
                         in_channels * kernel.h * kernel.w);
  }
  if (bias) {
    layer.bias.resize(static_cast<std::size_t>(out_channels));
    for (float& b : layer.bias) b = static_cast<float>(rng.Uniform(-0.1, 0.1));
  }
  if (norm) {
    layer.scale.resize(static_cast<std::size_t>(out_channels));
    layer.shift.resize(static_cast<std::size_t>(out_channels));
    for (float& s : layer.scale) s = static_cast<float>(rng.Uniform(0.5, 1.5));
    for (float& s : layer.shift) s = static_cast<float>(rng.Uniform(-0.1, 0.1));
  }
  return layer;
}

BlockWeights RandomBlockWeights(BlockKind kind, int in_channels,
                                std::uint64_t seed) {
  BlockWeights w;
  w.kind = kind;
  Rng rng(seed);
  for (const LayerPlan& p : Plan(kind)) {
    const int in = p.in_channels == 0 ? in_channels : p.in_channels;
    w.layers.emplace(std::string(p.name),
                     RandomConvLayer(in, p.out_channels, p.kernel, p.separable,
                                     false, true, rng.Next()));
  }
  return w;
}

}  // namespace panoptic
