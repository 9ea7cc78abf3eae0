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

#include "panoptic/fusion.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "panoptic/errors.h"

namespace panoptic {
namespace {

constexpr std::int32_t kNoOwner = -1;

void CheckSemantic(const Tensor& semantic_logits, const ClassConfig& classes) {
  if (semantic_logits.n() != 1 || semantic_logits.c() != classes.size()) {
    throw ShapeError("semantic logits " + semantic_logits.dims().ToString() +
                     " must be 1 x " + std::to_string(classes.size()) + " x H x W");
  }
}

// Fills the canvas from per-pixel instance owners (index into `class_ids`, or
// kNoOwner) and the semantic argmax, then applies the stuff area filter and
// numbers the instances that own pixels.
PanopticMap Compose(const std::vector<std::int32_t>& owner,
                    const std::vector<std::int32_t>& class_ids,
                    const Tensor& semantic_logits, const ClassConfig& classes,
                    const FusionConfig& cfg) {
  const int h = semantic_logits.h(), w = semantic_logits.w();
  PanopticMap map = PanopticMap::Void(h, w, classes.void_id());
  const std::size_t plane = semantic_logits.dims().plane();
  auto sem = semantic_logits.data();
  std::vector<std::int32_t> id_of(class_ids.size(), 0);
  std::int32_t next_id = 1;
  for (std::size_t k = 0; k < class_ids.size(); ++k) {
    if (std::find(owner.begin(), owner.end(), static_cast<std::int32_t>(k)) != owner.end()) {
      id_of[k] = next_id++;
    }
  }
  std::map<std::int32_t, std::int64_t> stuff_area;
  for (std::size_t p = 0; p < plane; ++p) {
    if (owner[p] != kNoOwner) {
      map.class_map[p] = class_ids[owner[p]];
      map.instance_map[p] = id_of[owner[p]];
      continue;
    }
    int best = 0;
    for (int c = 1; c < classes.size(); ++c) {
      if (sem[c * plane + p] > sem[best * plane + p]) best = c;
    }
    const ClassInfo& info = classes.classes()[best];
    if (!info.is_thing) {
      map.class_map[p] = info.id;
      ++stuff_area[info.id];
    }
  }
  for (std::size_t p = 0; p < plane; ++p) {
    if (map.instance_map[p] != 0) continue;
    auto it = stuff_area.find(map.class_map[p]);
    if (it != stuff_area.end() && it->second < cfg.min_stuff_area) {
      map.class_map[p] = map.void_id;
    }
  }
  return map;
}

}  // namespace

std::string_view FusionStrategyName(FusionStrategy s) {
  switch (s) {
    case FusionStrategy::kAdaptive:
      return "adaptive";
    case FusionStrategy::kAdd:
      return "add";
    case FusionStrategy::kMultiply:
      return "multiply";
    case FusionStrategy::kBaseline:
      return "baseline";
  }
  return "unknown";
}

FusionStrategy ParseFusionStrategy(std::string_view name) {
  for (auto s : {FusionStrategy::kAdaptive, FusionStrategy::kAdd,
                 FusionStrategy::kMultiply, FusionStrategy::kBaseline}) {
    if (FusionStrategyName(s) == name) return s;
  }
  throw InputError("unknown fusion strategy '" + std::string(name) + "'");
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double FuseAdaptive(double a, double b) {
  return (Sigmoid(a) + Sigmoid(b)) * (a + b);
}

Tensor FuseAdaptive(const Tensor& ml_a, const Tensor& ml_b) {
  RequireSameDims(ml_a.dims(), ml_b.dims(), "fuse_adaptive");
  Tensor out(ml_a.dims());
  auto a = ml_a.data();
  auto b = ml_b.data();
  auto o = out.mutable_data();
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] = static_cast<float>(FuseAdaptive(a[i], b[i]));
  }
  DebugCheckFinite(out, "fuse_adaptive");
  return out;
}

Tensor FuseAlternative(const Tensor& ml_a, const Tensor& ml_b,
                       FusionStrategy strategy) {
  switch (strategy) {
    case FusionStrategy::kAdd:
      return Add(ml_a, ml_b);
    case FusionStrategy::kMultiply:
      return Multiply(ml_a, ml_b);
    default:
      throw InputError("fuse_alternative supports add and multiply, not " +
                       std::string(FusionStrategyName(strategy)));
  }
}

PanopticMap AssemblePanoptic(std::span<const FusedInstance> instances,
                             const Tensor& semantic_logits,
                             const ClassConfig& classes, const FusionConfig& cfg) {
  CheckSemantic(semantic_logits, classes);
  const Dims plane_dims{1, 1, semantic_logits.h(), semantic_logits.w()};
  std::vector<std::int32_t> class_ids;
  for (const FusedInstance& inst : instances) {
    RequireSameDims(inst.logits.dims(), plane_dims, "assemble_panoptic");
    if (!classes.is_thing(inst.class_id)) {
      throw InputError("instance class " + std::to_string(inst.class_id) +
                       " is not flagged as a thing class");
    }
    class_ids.push_back(inst.class_id);
  }
  const std::vector<int> stuff = classes.stuff_channels();
  const std::size_t plane = plane_dims.plane();
  auto sem = semantic_logits.data();
  std::vector<std::int32_t> owner(plane, kNoOwner);
  for (std::size_t p = 0; p < plane; ++p) {
    float best = -std::numeric_limits<float>::infinity();
    std::int32_t best_owner = kNoOwner;
    bool any = false;
    for (std::size_t k = 0; k < instances.size(); ++k) {
      const float v = instances[k].logits.data()[p];
      if (!any || v > best) {
        best = v;
        best_owner = static_cast<std::int32_t>(k);
        any = true;
      }
    }
    for (int c : stuff) {
      const float v = sem[c * plane + p];
      if (!any || v > best) {
        best = v;
        best_owner = kNoOwner;
        any = true;
      }
    }
    owner[p] = best_owner;
  }
  return Compose(owner, class_ids, semantic_logits, classes, cfg);
}

PanopticMap AssembleBaseline(std::span<const PastedInstance> sorted,
                             const Tensor& semantic_logits,
                             const ClassConfig& classes, const FusionConfig& cfg) {
  CheckSemantic(semantic_logits, classes);
  const Dims plane_dims{1, 1, semantic_logits.h(), semantic_logits.w()};
  std::vector<std::int32_t> owner(plane_dims.plane(), kNoOwner);
  std::vector<std::int32_t> class_ids;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    RequireSameDims(sorted[k].logits.dims(), plane_dims, "assemble_baseline");
    if (!classes.is_thing(sorted[k].prediction.class_id)) {
      throw InputError("instance class " + std::to_string(sorted[k].prediction.class_id) +
                       " is not flagged as a thing class");
    }
    class_ids.push_back(sorted[k].prediction.class_id);
    auto logits = sorted[k].logits.data();
    for (std::size_t p = 0; p < owner.size(); ++p) {
      if (owner[p] == kNoOwner && logits[p] > 0.0f) owner[p] = static_cast<std::int32_t>(k);
    }
  }
  return Compose(owner, class_ids, semantic_logits, classes, cfg);
}

PanopticMap FusePanoptic(const Tensor& semantic_logits,
                         std::vector<InstancePrediction> instances,
                         const ClassConfig& classes, const FusionConfig& cfg,
                         FusionStrategy strategy, FusionStats* stats) {
  cfg.Validate();
  CheckSemantic(semantic_logits, classes);
  const std::size_t input_count = instances.size();
  std::vector<InstancePrediction> confident = FilterAndSort(std::move(instances), cfg);
  const std::size_t confident_count = confident.size();
  std::vector<PastedInstance> pasted;
  pasted.reserve(confident.size());
  for (InstancePrediction& inst : confident) {
    if (!classes.is_thing(inst.class_id)) {
      throw InputError("instance class " + std::to_string(inst.class_id) +
                       " is not flagged as a thing class");
    }
    Tensor logits = PasteMaskLogits(inst, semantic_logits.h(), semantic_logits.w());
    pasted.push_back({std::move(inst), std::move(logits)});
  }
  std::vector<PastedInstance> kept = SuppressOverlaps(std::move(pasted), cfg);
  if (stats != nullptr) {
    *stats = {input_count, confident_count, kept.size()};
  }
  if (strategy == FusionStrategy::kBaseline) {
    return AssembleBaseline(kept, semantic_logits, classes, cfg);
  }
  std::vector<FusedInstance> fused;
  fused.reserve(kept.size());
  for (const PastedInstance& inst : kept) {
    const Tensor ml_b = BuildMlb(semantic_logits, inst.prediction, classes);
    fused.push_back({inst.prediction.class_id,
                     strategy == FusionStrategy::kAdaptive
                         ? FuseAdaptive(inst.logits, ml_b)
                         : FuseAlternative(inst.logits, ml_b, strategy)});
  }
  return AssemblePanoptic(fused, semantic_logits, classes, cfg);
}

}  // namespace panoptic
