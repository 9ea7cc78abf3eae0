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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "panoptic/errors.h"
#include "panoptic/kernels.h"
#include "panoptic/tensor.h"

namespace panoptic {

Tensor Activate(const Tensor& input, Activation activation) {
  Tensor out(input.dims());
  auto src = input.data();
  auto dst = out.mutable_data();
  switch (activation.kind) {
    case ActivationKind::kLeakyRelu:
      kernels::Active().leaky_relu(src.data(), activation.slope, dst.data(),
                                   src.size());
      break;
    case ActivationKind::kSigmoid:
      for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = static_cast<float>(1.0 / (1.0 + std::exp(-static_cast<double>(src[i]))));
      }
      break;
    case ActivationKind::kChannelSoftmax: {
      const std::size_t plane = input.dims().plane();
      const int channels = input.c();
      std::vector<double> e(static_cast<std::size_t>(channels));
      for (int n = 0; n < input.n(); ++n) {
        const std::size_t base = input.offset(n, 0, 0, 0);
        for (std::size_t p = 0; p < plane; ++p) {
          double peak = src[base + p];
          for (int c = 1; c < channels; ++c) {
            peak = std::max(peak, static_cast<double>(src[base + c * plane + p]));
          }
          double sum = 0.0;
          for (int c = 0; c < channels; ++c) {
            e[c] = std::exp(static_cast<double>(src[base + c * plane + p]) - peak);
            sum += e[c];
          }
          for (int c = 0; c < channels; ++c) {
            dst[base + c * plane + p] = static_cast<float>(e[c] / sum);
          }
        }
      }
      break;
    }
  }
  DebugCheckFinite(out, "activate");
  return out;
}

Tensor AffineNorm(const Tensor& input, std::span<const float> scale,
                  std::span<const float> shift) {
  const auto channels = static_cast<std::size_t>(input.c());
  if (scale.size() != channels || shift.size() != channels) {
    throw ShapeError("affine_norm: scale/shift lengths " +
                     std::to_string(scale.size()) + "/" +
                     std::to_string(shift.size()) + " for input dims " +
                     input.dims().ToString());
  }
  Tensor out(input.dims());
  const auto& table = kernels::Active();
  for (int n = 0; n < input.n(); ++n) {
    for (int c = 0; c < input.c(); ++c) {
      auto src = input.plane(n, c);
      table.affine(src.data(), scale[c], shift[c], out.plane(n, c).data(),
                   src.size());
    }
  }
  DebugCheckFinite(out, "affine_norm");
  return out;
}

Tensor Add(const Tensor& a, const Tensor& b) {
  RequireSameDims(a.dims(), b.dims(), "add");
  Tensor out(a.dims());
  kernels::Active().add(a.data().data(), b.data().data(),
                        out.mutable_data().data(), a.size());
  DebugCheckFinite(out, "add");
  return out;
}

Tensor Multiply(const Tensor& a, const Tensor& b) {
  RequireSameDims(a.dims(), b.dims(), "multiply");
  Tensor out(a.dims());
  kernels::Active().mul(a.data().data(), b.data().data(),
                        out.mutable_data().data(), a.size());
  DebugCheckFinite(out, "multiply");
  return out;
}

}  // namespace panoptic
