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

#ifndef PANOPTIC_FUSION_H_
#define PANOPTIC_FUSION_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panoptic/class_config.h"
#include "panoptic/instprep.h"
#include "panoptic/panoptic_map.h"
#include "panoptic/tensor.h"

namespace panoptic {

enum class FusionStrategy { kAdaptive, kAdd, kMultiply, kBaseline };

std::string_view FusionStrategyName(FusionStrategy s);
// Throws InputError for an unknown name.
FusionStrategy ParseFusionStrategy(std::string_view name);

double Sigmoid(double x);

// (sigmoid(a) + sigmoid(b)) * (a + b).
double FuseAdaptive(double a, double b);
Tensor FuseAdaptive(const Tensor& ml_a, const Tensor& ml_b);

// Elementwise a + b or a * b. Throws InputError for other strategies.
Tensor FuseAlternative(const Tensor& ml_a, const Tensor& ml_b,
                       FusionStrategy strategy);

struct FusedInstance {
  std::int32_t class_id = 0;
  Tensor logits;  // 1 x 1 x H x W
};

// Canvas assembly. Intermediate logits are [instance_0 .. instance_K-1,
// stuff channels in class order]; the per-pixel argmax (ties to the lowest
// index) gives instance pixels. Every other pixel takes the semantic argmax
// over all classes when it is a stuff class whose total area on the canvas
// reaches min_stuff_area, and void otherwise. Instances that win pixels are
// numbered 1..K in input order.
PanopticMap AssemblePanoptic(std::span<const FusedInstance> instances,
                             const Tensor& semantic_logits,
                             const ClassConfig& classes, const FusionConfig& cfg);

// Heuristic fusion without logit mixing: binary instance masks are pasted in
// score order (earlier instances keep contested pixels), remaining pixels are
// filled from the semantic argmax as in AssemblePanoptic.
PanopticMap AssembleBaseline(std::span<const PastedInstance> sorted,
                             const Tensor& semantic_logits,
                             const ClassConfig& classes, const FusionConfig& cfg);

struct FusionStats {
  std::size_t input_instances = 0;
  std::size_t confident_instances = 0;
  std::size_t retained_instances = 0;
};

// Full per-image pipeline: filter, paste, suppress, build ML_B, fuse with the
// chosen strategy, assemble.
PanopticMap FusePanoptic(const Tensor& semantic_logits,
                         std::vector<InstancePrediction> instances,
                         const ClassConfig& classes, const FusionConfig& cfg,
                         FusionStrategy strategy, FusionStats* stats = nullptr);

}  // namespace panoptic

#endif  // PANOPTIC_FUSION_H_
