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


#ifndef PANOPTIC_LOSSES_H_
#define PANOPTIC_LOSSES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "panoptic/tensor.h"

namespace panoptic {

// Probabilities are clamped to [kProbEpsilon, 1 - kProbEpsilon] before logs.
inline constexpr double kProbEpsilon = 1e-7;
inline constexpr double kWorstPixelFraction = 0.25;
inline constexpr std::size_t kMaxProposalSamples = 256;
inline constexpr std::size_t kMaxDetectionSamples = 512;
// Mask target value for pixels that do not take part in the loss.
inline constexpr std::uint8_t kMaskVoid = 255;

// A loss value. Degenerate inputs (empty sample sets, all-void targets)
// produce 0 and a warning instead of an error.
struct LossValue {
  double value = 0.0;
  std::vector<std::string> warnings;
};

// Weighted per-pixel log loss. `probs` is N x C x H x W after softmax;
// `labels` holds N*H*W channel indices in [0, C) or `void_label`. Per image,
// the k = ceil(0.25 * H * W) non-void pixels with the lowest true-class
// probability get weight 4 / (H * W) (ties broken by pixel index, k capped
// at the non-void count); the batch loss is the mean over images.
LossValue SemanticLoss(const Tensor& probs, std::span<const std::int32_t> labels,
                       std::int32_t void_label);

// Per-image selection used by SemanticLoss: sorted pixel indices.
std::vector<std::size_t> SelectWorstPixels(const Tensor& probs, int image,
                                           std::span<const std::int32_t> labels,
                                           std::int32_t void_label);

double BinaryCrossEntropy(double target, double p);

struct ObjectnessSample {
  double target = 0.0;  // p*, 0 or 1
  double p = 0.5;
};

// Mean binary cross-entropy over the sampled anchors.
LossValue ObjectnessLoss(std::span<const ObjectnessSample> samples);

// Box in center form.
struct CenterBox {
  double cx = 0, cy = 0, w = 0, h = 0;
};

struct BoxDelta {
  double tx = 0, ty = 0, tw = 0, th = 0;
};

// Both throw InputError for a non-positive width or height.
BoxDelta EncodeBox(const CenterBox& box, const CenterBox& anchor);
CenterBox DecodeBox(const BoxDelta& t, const CenterBox& anchor);

double SmoothL1(double d);

// Sum of smooth L1 over the four components of every pair, divided by
// `normalizer` (the sample set size).
LossValue RegressionLoss(std::span<const BoxDelta> target,
                         std::span<const BoxDelta> predicted, std::size_t normalizer);

struct ClassificationSample {
  int target = 0;                    // index of the one-hot entry
  std::vector<double> distribution;  // sums to 1
};

// Mean cross-entropy.
LossValue ClassificationLoss(std::span<const ClassificationSample> samples);

struct MaskSample {
  std::vector<std::uint8_t> target;  // 28*28 values in {0, 1, kMaskVoid}
  std::vector<double> probs;         // 28*28 values in (0, 1)
};

// Mean BCE over the non-void pixels of each instance, averaged over
// instances.
LossValue MaskLoss(std::span<const MaskSample> samples);

struct LossComponents {
  double semantic = 0.0;
  double objectness = 0.0;
  double proposal_regression = 0.0;
  double classification = 0.0;
  double box_regression = 0.0;
  double mask = 0.0;
};

struct LossTotals {
  double instance = 0.0;
  double total = 0.0;
};

// Unweighted sums.
LossTotals TotalLoss(const LossComponents& c);

}  // namespace panoptic

#endif  // PANOPTIC_LOSSES_H_
