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

#include <cstddef>

#include "panoptic/kernels.h"

namespace panoptic::kernels {
namespace {

void Conv2d(const ConvGeometry& g, const float* in, const float* weights,
            const float* bias, float* out) {
  const int in_per_group = g.in_c / g.groups;
  const int out_per_group = g.out_c / g.groups;
  for (int oc = 0; oc < g.out_c; ++oc) {
    const int group = oc / out_per_group;
    const float* w_oc =
        weights + static_cast<std::size_t>(oc) * in_per_group * g.kernel_h *
                      g.kernel_w;
    float* out_plane = out + static_cast<std::size_t>(oc) * g.out_h * g.out_w;
    for (int oy = 0; oy < g.out_h; ++oy) {
      for (int ox = 0; ox < g.out_w; ++ox) {
        double acc = 0.0;
        for (int icg = 0; icg < in_per_group; ++icg) {
          const int ic = group * in_per_group + icg;
          const float* in_plane =
              in + static_cast<std::size_t>(ic) * g.in_h * g.in_w;
          const float* w_ic = w_oc + static_cast<std::size_t>(icg) *
                                         g.kernel_h * g.kernel_w;
          for (int ky = 0; ky < g.kernel_h; ++ky) {
            const int iy = oy * g.stride - g.pad_top + ky * g.dilation_h;
            if (iy < 0 || iy >= g.in_h) continue;
            for (int kx = 0; kx < g.kernel_w; ++kx) {
              const int ix = ox * g.stride - g.pad_left + kx * g.dilation_w;
              if (ix < 0 || ix >= g.in_w) continue;
              acc += static_cast<double>(w_ic[ky * g.kernel_w + kx]) *
                     static_cast<double>(
                         in_plane[static_cast<std::size_t>(iy) * g.in_w + ix]);
            }
          }
        }
        if (bias != nullptr) acc += static_cast<double>(bias[oc]);
        out_plane[static_cast<std::size_t>(oy) * g.out_w + ox] =
            static_cast<float>(acc);
      }
    }
  }
}

void AddKernel(const float* a, const float* b, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void MulKernel(const float* a, const float* b, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void AffineKernel(const float* in, float scale, float shift, float* out,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = in[i] * scale + shift;
}

void LeakyReluKernel(const float* in, float slope, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = in[i] >= 0.0f ? in[i] : in[i] * slope;
  }
}

}  // namespace

const KernelTable& ScalarKernels() {
  static const KernelTable table{Isa::kScalar, Conv2d,       AddKernel,
                                 MulKernel,    AffineKernel, LeakyReluKernel};
  return table;
}

}  // namespace panoptic::kernels
