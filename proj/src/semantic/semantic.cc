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

#include "panoptic/semantic.h"

#include <string>

#include "panoptic/errors.h"
#include "panoptic/rng.h"

namespace panoptic {
namespace {

Tensor ResizeTo(const Tensor& x, const Tensor& like) {
  return BilinearResize(x, like.h(), like.w());
}

void ValidateLevels(const std::array<Tensor, kNumLevels>& levels,
                    const char* what) {
  for (int l = 1; l < kNumLevels; ++l) {
    const Dims& fine = levels[l - 1].dims();
    const Dims& coarse = levels[l].dims();
    if (fine.n != coarse.n || fine.h != 2 * coarse.h || fine.w != 2 * coarse.w) {
      throw ShapeError(std::string(what) + ": level " + std::to_string(l - 1) +
                       " dims " + fine.ToString() + " and level " +
                       std::to_string(l) + " dims " + coarse.ToString() +
                       " do not halve exactly");
    }
  }
}

void ValidateLayer(const ConvLayer& layer, const Dims& weights,
                   const std::string& where) {
  if (layer.separable()) throw InputError(where + " must be a standard 1x1 conv");
  RequireSameDims(layer.weights.dims(), weights, where.c_str());
  const auto out = static_cast<std::size_t>(weights.n);
  if ((!layer.bias.empty() && layer.bias.size() != out) ||
      layer.scale.size() != layer.shift.size() ||
      (!layer.scale.empty() && layer.scale.size() != out)) {
    throw ShapeError(where + ": bias/scale/shift lengths do not match " +
                     std::to_string(out) + " output channels");
  }
}

}  // namespace

void ValidateEncoderFeatures(const EncoderFeatures& feats) {
  ValidateLevels(feats.levels, "encoder features");
  for (int l = 0; l < kNumLevels; ++l) {
    if (!feats.levels[l].AllFinite()) {
      throw InputError("encoder features: level " + std::to_string(l) +
                       " holds a non-finite value");
    }
  }
}

EncoderFeatures StubEncoder(int input_h, int input_w,
                            std::array<int, kNumLevels> channels,
                            std::uint64_t seed, int batch) {
  if (input_h < 32 || input_w < 32 || input_h % 32 != 0 || input_w % 32 != 0) {
    throw ShapeError("stub encoder: input resolution " + std::to_string(input_h) +
                     "x" + std::to_string(input_w) +
                     " must be a positive multiple of 32 in both axes");
  }
  EncoderFeatures feats;
  Rng rng(seed);
  for (int l = 0; l < kNumLevels; ++l) {
    const int factor = 4 << l;
    const Dims dims{batch, channels[l], input_h / factor, input_w / factor};
    std::vector<float> v(dims.size());
    for (float& x : v) x = static_cast<float>(rng.Uniform(-1.0, 1.0));
    feats.levels[l] = Tensor(dims, std::move(v));
  }
  return feats;
}

PyramidFeatures TwoWayFpnForward(const EncoderFeatures& feats,
                                 const FpnWeights& w, FpnTrace* trace) {
  ValidateEncoderFeatures(feats);
  std::array<Tensor, kNumLevels> td, bu;
  td[3] = FpnLateralForward(feats.levels[3], w.top_down_lateral[3]);
  for (int l = 2; l >= 0; --l) {
    Tensor lateral = FpnLateralForward(feats.levels[l], w.top_down_lateral[l]);
    td[l] = Add(lateral, ResizeTo(td[l + 1], lateral));
  }
  bu[0] = FpnLateralForward(feats.levels[0], w.bottom_up_lateral[0]);
  for (int l = 1; l < kNumLevels; ++l) {
    Tensor lateral = FpnLateralForward(feats.levels[l], w.bottom_up_lateral[l]);
    bu[l] = Add(lateral, ResizeTo(bu[l - 1], lateral));
  }
  PyramidFeatures out;
  std::array<Tensor, kNumLevels> sums;
  for (int l = 0; l < kNumLevels; ++l) {
    sums[l] = Add(td[l], bu[l]);
    out.levels[l] = FpnOutputForward(sums[l], w.output[l]);
  }
  if (trace != nullptr) {
    trace->top_down = std::move(td);
    trace->bottom_up = std::move(bu);
    trace->sums = std::move(sums);
  }
  return out;
}

SemanticOutput SemanticHeadForward(const PyramidFeatures& p,
                                   const SemanticHeadWeights& w, int n_classes,
                                   SemanticHeadTrace* trace) {
  if (n_classes < 2) {
    throw InputError("semantic head needs at least 2 classes, got " +
                     std::to_string(n_classes));
  }
  ValidateLevels(p.levels, "pyramid features");
  for (const Tensor& level : p.levels) {
    if (level.c() != kFpnChannels) {
      throw ShapeError("pyramid level " + level.dims().ToString() + " must have " +
                       std::to_string(kFpnChannels) + " channels");
    }
  }
  if (w.classifier.out_channels() != n_classes) {
    throw ShapeError("classifier emits " +
                     std::to_string(w.classifier.out_channels()) +
                     " channels but n_classes is " + std::to_string(n_classes));
  }
  const ConvSpec pointwise = ConvSpec::Pointwise();

  DpcTrace dpc32_trace, dpc16_trace;
  Tensor d32 = ApplyConvLayer(DpcForward(p.levels[3], w.dpc32, &dpc32_trace),
                              w.proj32, pointwise);
  Tensor d16 = ApplyConvLayer(DpcForward(p.levels[2], w.dpc16, &dpc16_trace),
                              w.proj16, pointwise);
  Tensor l8 = LsfeForward(p.levels[1], w.lsfe8);
  Tensor l4 = LsfeForward(p.levels[0], w.lsfe4);

  Tensor a32 = std::move(d32);
  Tensor a16 = Add(d16, ResizeTo(a32, d16));
  Tensor a8 = Add(l8, McForward(a16, w.mc16));
  Tensor a4 = Add(l4, McForward(a8, w.mc8));

  const std::array<Tensor, kNumLevels> streams{a4, ResizeTo(a8, a4),
                                               ResizeTo(a16, a4),
                                               ResizeTo(a32, a4)};
  Tensor concat = ConcatChannels(streams);
  Tensor classes = ApplyConvLayer(concat, w.classifier, pointwise, false);
  SemanticOutput out;
  out.logits = BilinearResize(classes, 4 * classes.h(), 4 * classes.w());
  out.probabilities = Activate(out.logits, Activation::ChannelSoftmax());
  if (trace != nullptr) {
    trace->dpc32 = std::move(dpc32_trace);
    trace->dpc16 = std::move(dpc16_trace);
    trace->aligned = {std::move(a4), std::move(a8), std::move(a16),
                      std::move(a32)};
    trace->concat = std::move(concat);
  }
  return out;
}

NetworkWeights RandomNetworkWeights(std::array<int, kNumLevels> encoder_channels,
                                    int n_classes, std::uint64_t seed) {
  NetworkWeights w;
  w.encoder_channels = encoder_channels;
  w.n_classes = n_classes;
  Rng rng(seed);
  for (int l = 0; l < kNumLevels; ++l) {
    w.fpn.top_down_lateral[l] = RandomBlockWeights(
        BlockKind::kFpnLateral, encoder_channels[l], rng.Next());
    w.fpn.bottom_up_lateral[l] = RandomBlockWeights(
        BlockKind::kFpnLateral, encoder_channels[l], rng.Next());
    w.fpn.output[l] =
        RandomBlockWeights(BlockKind::kFpnOutput, kFpnChannels, rng.Next());
  }
  SemanticHeadWeights& h = w.head;
  h.dpc32 = RandomBlockWeights(BlockKind::kDpc, kFpnChannels, rng.Next());
  h.dpc16 = RandomBlockWeights(BlockKind::kDpc, kFpnChannels, rng.Next());
  h.proj32 = RandomConvLayer(kDpcChannels, kLsfeChannels, {1, 1}, false, false,
                             true, rng.Next());
  h.proj16 = RandomConvLayer(kDpcChannels, kLsfeChannels, {1, 1}, false, false,
                             true, rng.Next());
  h.lsfe8 = RandomBlockWeights(BlockKind::kLsfe, kFpnChannels, rng.Next());
  h.lsfe4 = RandomBlockWeights(BlockKind::kLsfe, kFpnChannels, rng.Next());
  h.mc16 = RandomBlockWeights(BlockKind::kMc, kMcChannels, rng.Next());
  h.mc8 = RandomBlockWeights(BlockKind::kMc, kMcChannels, rng.Next());
  h.classifier = RandomConvLayer(kHeadConcatChannels, n_classes, {1, 1}, false,
                                 true, false, rng.Next());
  return w;
}

void ValidateNetworkWeights(const NetworkWeights& w) {
  for (int l = 0; l < kNumLevels; ++l) {
    ValidateBlock(w.fpn.top_down_lateral[l], w.encoder_channels[l]);
    ValidateBlock(w.fpn.bottom_up_lateral[l], w.encoder_channels[l]);
    ValidateBlock(w.fpn.output[l], kFpnChannels);
  }
  const SemanticHeadWeights& h = w.head;
  ValidateBlock(h.dpc32, kFpnChannels);
  ValidateBlock(h.dpc16, kFpnChannels);
  ValidateLayer(h.proj32, {kLsfeChannels, kDpcChannels, 1, 1}, "head.proj32");
  ValidateLayer(h.proj16, {kLsfeChannels, kDpcChannels, 1, 1}, "head.proj16");
  ValidateBlock(h.lsfe8, kFpnChannels);
  ValidateBlock(h.lsfe4, kFpnChannels);
  ValidateBlock(h.mc16, kMcChannels);
  ValidateBlock(h.mc8, kMcChannels);
  ValidateLayer(h.classifier, {w.n_classes, kHeadConcatChannels, 1, 1},
                "head.classifier");
}

}  // namespace panoptic
