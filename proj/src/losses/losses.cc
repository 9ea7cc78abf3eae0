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

#include "panoptic/losses.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "panoptic/errors.h"
#include "panoptic/instprep.h"

namespace panoptic {
namespace {

double Clamp(double p) { return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon); }

void CheckProbability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError(std::string(what) + ": probability " + std::to_string(p) +
                     " outside [0, 1]");
  }
}

void CheckExtent(const CenterBox& b, const char* what) {
  if (!(b.w > 0.0 && b.h > 0.0) || !std::isfinite(b.w) || !std::isfinite(b.h)) {
    throw InputError(std::string(what) + " needs a positive width and height, got " +
                     std::to_string(b.w) + " x " + std::to_string(b.h));
  }
}

}  // namespace

std::vector<std::size_t> SelectWorstPixels(const Tensor& probs, int image,
                                           std::span<const std::int32_t> labels,
                                           std::int32_t void_label) {
  const std::size_t plane = probs.dims().plane();
  const std::size_t base = static_cast<std::size_t>(image) * plane;
  std::vector<std::size_t> candidates;
  std::vector<double> p(plane, 0.0);
  for (std::size_t i = 0; i < plane; ++i) {
    const std::int32_t label = labels[base + i];
    if (label == void_label) continue;
    if (label < 0 || label >= probs.c()) {
      throw InputError("semantic_loss: label " + std::to_string(label) +
                       " at pixel " + std::to_string(i) + " of image " +
                       std::to_string(image) + " is not a channel or void");
    }
    p[i] = Clamp(probs.plane(image, label)[i]);
    candidates.push_back(i);
  }
  const std::size_t k = std::min<std::size_t>(
      candidates.size(),
      static_cast<std::size_t>(std::ceil(kWorstPixelFraction * static_cast<double>(plane))));
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  candidates.resize(k);
  return candidates;
}

LossValue SemanticLoss(const Tensor& probs, std::span<const std::int32_t> labels,
                       std::int32_t void_label) {
  const std::size_t plane = probs.dims().plane();
  if (labels.size() != static_cast<std::size_t>(probs.n()) * plane) {
    throw ShapeError("semantic_loss: " + std::to_string(labels.size()) +
                     " labels for probabilities " + probs.dims().ToString());
  }
  for (float v : probs.data()) CheckProbability(v, "semantic_loss");
  LossValue out;
  const double weight = 1.0 / (kWorstPixelFraction * static_cast<double>(plane));
  double sum = 0.0;
  for (int n = 0; n < probs.n(); ++n) {
    const std::vector<std::size_t> worst = SelectWorstPixels(probs, n, labels, void_label);
    if (worst.empty()) {
      out.warnings.push_back("semantic_loss: image " + std::to_string(n) +
                             " has no labelled pixels; its loss is 0");
      continue;
    }
    double image_loss = 0.0;
    for (std::size_t i : worst) {
      const std::int32_t label = labels[static_cast<std::size_t>(n) * plane + i];
      image_loss -= weight * std::log(Clamp(probs.plane(n, label)[i]));
    }
    sum += image_loss;
  }
  out.value = sum / probs.n();
  return out;
}

double BinaryCrossEntropy(double target, double p) {
  const double q = Clamp(p);
  return -(target * std::log(q) + (1.0 - target) * std::log(1.0 - q));
}

LossValue ObjectnessLoss(std::span<const ObjectnessSample> samples) {
  LossValue out;
  if (samples.empty()) {
    out.warnings.push_back("objectness_loss: empty sample set; loss is 0");
    return out;
  }
  if (samples.size() > kMaxProposalSamples) {
    throw InputError("objectness_loss: " + std::to_string(samples.size()) +
                     " samples exceed the limit of " + std::to_string(kMaxProposalSamples));
  }
  double sum = 0.0;
  for (const ObjectnessSample& s : samples) {
    if (s.target != 0.0 && s.target != 1.0) {
      throw InputError("objectness_loss: target " + std::to_string(s.target) +
                       " is not 0 or 1");
    }
    CheckProbability(s.p, "objectness_loss");
    sum += BinaryCrossEntropy(s.target, s.p);
  }
  out.value = sum / static_cast<double>(samples.size());
  return out;
}

BoxDelta EncodeBox(const CenterBox& box, const CenterBox& anchor) {
  CheckExtent(box, "encode_box: box");
  CheckExtent(anchor, "encode_box: anchor");
  return {(box.cx - anchor.cx) / anchor.w, (box.cy - anchor.cy) / anchor.h,
          std::log(box.w / anchor.w), std::log(box.h / anchor.h)};
}

CenterBox DecodeBox(const BoxDelta& t, const CenterBox& anchor) {
  CheckExtent(anchor, "decode_box: anchor");
  const CenterBox box{anchor.cx + t.tx * anchor.w, anchor.cy + t.ty * anchor.h,
                      anchor.w * std::exp(t.tw), anchor.h * std::exp(t.th)};
  CheckExtent(box, "decode_box: result");
  return box;
}

double SmoothL1(double d) {
  const double a = std::abs(d);
  return a < 1.0 ? 0.5 * d * d : a - 0.5;
}

LossValue RegressionLoss(std::span<const BoxDelta> target,
                         std::span<const BoxDelta> predicted, std::size_t normalizer) {
  if (target.size() != predicted.size()) {
    throw InputError("regression_loss: " + std::to_string(target.size()) +
                     " targets but " + std::to_string(predicted.size()) + " predictions");
  }
  if (normalizer == 0) throw InputError("regression_loss: normalizer must be positive");
  LossValue out;
  if (target.empty()) {
    out.warnings.push_back("regression_loss: no positive matches; loss is 0");
    return out;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    sum += SmoothL1(predicted[i].tx - target[i].tx) + SmoothL1(predicted[i].ty - target[i].ty) +
           SmoothL1(predicted[i].tw - target[i].tw) + SmoothL1(predicted[i].th - target[i].th);
  }
  out.value = sum / static_cast<double>(normalizer);
  return out;
}

LossValue ClassificationLoss(std::span<const ClassificationSample> samples) {
  LossValue out;
  if (samples.empty()) {
    out.warnings.push_back("classification_loss: empty sample set; loss is 0");
    return out;
  }
  if (samples.size() > kMaxDetectionSamples) {
    throw InputError("classification_loss: " + std::to_string(samples.size()) +
                     " samples exceed the limit of " + std::to_string(kMaxDetectionSamples));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ClassificationSample& s = samples[i];
    if (s.target < 0 || s.target >= static_cast<int>(s.distribution.size())) {
      throw InputError("classification_loss: sample " + std::to_string(i) + " target " +
                       std::to_string(s.target) + " outside its distribution");
    }
    double total = 0.0;
    for (double p : s.distribution) {
      CheckProbability(p, "classification_loss");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) {
      throw InputError("classification_loss: sample " + std::to_string(i) +
                       " distribution sums to " + std::to_string(total));
    }
    sum -= std::log(Clamp(s.distribution[s.target]));
  }
  out.value = sum / static_cast<double>(samples.size());
  return out;
}

LossValue MaskLoss(std::span<const MaskSample> samples) {
  LossValue out;
  if (samples.empty()) {
    out.warnings.push_back("mask_loss: empty sample set; loss is 0");
    return out;
  }
  if (samples.size() > kMaxDetectionSamples) {
    throw InputError("mask_loss: " + std::to_string(samples.size()) +
                     " samples exceed the limit of " + std::to_string(kMaxDetectionSamples));
  }
  constexpr std::size_t kPixels = static_cast<std::size_t>(kMaskSize) * kMaskSize;
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const MaskSample& s = samples[i];
    if (s.target.size() != kPixels || s.probs.size() != kPixels) {
      throw ShapeError("mask_loss: sample " + std::to_string(i) + " has " +
                       std::to_string(s.target.size()) + " target and " +
                       std::to_string(s.probs.size()) + " predicted pixels, expected " +
                       std::to_string(kPixels));
    }
    double instance = 0.0;
    std::size_t counted = 0;
    for (std::size_t j = 0; j < kPixels; ++j) {
      if (s.target[j] == kMaskVoid) continue;
      if (s.target[j] > 1) {
        throw InputError("mask_loss: sample " + std::to_string(i) + " target value " +
                         std::to_string(s.target[j]) + " at pixel " + std::to_string(j));
      }
      CheckProbability(s.probs[j], "mask_loss");
      instance += BinaryCrossEntropy(s.target[j], s.probs[j]);
      ++counted;
    }
    if (counted == 0) {
      out.warnings.push_back("mask_loss: sample " + std::to_string(i) +
                             " target is entirely void; it contributes 0");
      continue;
    }
    sum += instance / static_cast<double>(counted);
  }
  out.value = sum / static_cast<double>(samples.size());
  return out;
}

LossTotals TotalLoss(const LossComponents& c) {
  LossTotals t;
  t.instance = c.objectness + c.proposal_regression + c.classification +
               c.box_regression + c.mask;
  t.total = c.semantic + t.instance;
  return t;
}

}  // namespace panoptic
