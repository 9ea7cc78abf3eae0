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
#include <cstddef>
#include <vector>

#include "panoptic/kernels.h"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define PANOPTIC_HAVE_X86 1
#else
#define PANOPTIC_HAVE_X86 0
#endif

namespace panoptic::kernels {

#if PANOPTIC_HAVE_X86

namespace {

#define PANOPTIC_AVX2 __attribute__((target("avx2")))

// Row-at-a-time convolution: for each output row the taps are visited in the
// same (input channel, ky, kx) order as the scalar kernel, with four output
// columns accumulated per instruction. Products of two floats are exact in
// double, so the only rounding is in the adds, which happen in identical order.
PANOPTIC_AVX2 void Conv2d(const ConvGeometry& g, const float* in,
                          const float* weights, const float* bias,
                          float* out) {
  thread_local std::vector<double> acc;
  acc.resize(static_cast<std::size_t>(g.out_w));
  const int in_per_group = g.in_c / g.groups;
  const int out_per_group = g.out_c / g.groups;

  for (int oc = 0; oc < g.out_c; ++oc) {
    const int group = oc / out_per_group;
    const float* w_oc =
        weights + static_cast<std::size_t>(oc) * in_per_group * g.kernel_h *
                      g.kernel_w;
    float* out_plane = out + static_cast<std::size_t>(oc) * g.out_h * g.out_w;
    for (int oy = 0; oy < g.out_h; ++oy) {
      std::fill(acc.begin(), acc.end(), 0.0);
      double* a = acc.data();
      for (int icg = 0; icg < in_per_group; ++icg) {
        const int ic = group * in_per_group + icg;
        const float* in_plane =
            in + static_cast<std::size_t>(ic) * g.in_h * g.in_w;
        const float* w_ic =
            w_oc + static_cast<std::size_t>(icg) * g.kernel_h * g.kernel_w;
        for (int ky = 0; ky < g.kernel_h; ++ky) {
          const int iy = oy * g.stride - g.pad_top + ky * g.dilation_h;
          if (iy < 0 || iy >= g.in_h) continue;
          const float* in_row = in_plane + static_cast<std::size_t>(iy) * g.in_w;
          for (int kx = 0; kx < g.kernel_w; ++kx) {
            const int x_off = kx * g.dilation_w - g.pad_left;
            const int lo =
                x_off >= 0 ? 0 : (-x_off + g.stride - 1) / g.stride;
            const int last = g.in_w - 1 - x_off;
            const int hi = last < 0 ? 0 : std::min(g.out_w, last / g.stride + 1);
            if (lo >= hi) continue;
            const double wv = static_cast<double>(w_ic[ky * g.kernel_w + kx]);
            int ox = lo;
            if (g.stride == 1) {
              const float* src = in_row + x_off;
              const __m256d wv4 = _mm256_set1_pd(wv);
              for (; ox + 4 <= hi; ox += 4) {
                const __m256d v = _mm256_cvtps_pd(_mm_loadu_ps(src + ox));
                __m256d s = _mm256_loadu_pd(a + ox);
                s = _mm256_add_pd(s, _mm256_mul_pd(wv4, v));
                _mm256_storeu_pd(a + ox, s);
              }
              for (; ox < hi; ++ox) {
                a[ox] += wv * static_cast<double>(src[ox]);
              }
            } else {
              for (; ox < hi; ++ox) {
                a[ox] += wv * static_cast<double>(in_row[ox * g.stride + x_off]);
              }
            }
          }
        }
      }
      float* out_row = out_plane + static_cast<std::size_t>(oy) * g.out_w;
      const double b = bias != nullptr ? static_cast<double>(bias[oc]) : 0.0;
      for (int ox = 0; ox < g.out_w; ++ox) {
        out_row[ox] = static_cast<float>(bias != nullptr ? a[ox] + b : a[ox]);
      }
    }
  }
}

PANOPTIC_AVX2 void AddKernel(const float* x, const float* y, float* out,
                             std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(out + i,
                     _mm256_add_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] + y[i];
}

PANOPTIC_AVX2 void MulKernel(const float* x, const float* y, float* out,
                             std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(out + i,
                     _mm256_mul_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  }
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

PANOPTIC_AVX2 void AffineKernel(const float* in, float scale, float shift,
                                float* out, std::size_t n) {
  const __m256 s = _mm256_set1_ps(scale);
  const __m256 t = _mm256_set1_ps(shift);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(in + i);
    _mm256_storeu_ps(out + i, _mm256_add_ps(_mm256_mul_ps(v, s), t));
  }
  for (; i < n; ++i) out[i] = in[i] * scale + shift;
}

PANOPTIC_AVX2 void LeakyReluKernel(const float* in, float slope, float* out,
                                   std::size_t n) {
  const __m256 k = _mm256_set1_ps(slope);
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(in + i);
    const __m256 keep = _mm256_cmp_ps(v, zero, _CMP_GE_OQ);
    _mm256_storeu_ps(out + i, _mm256_blendv_ps(_mm256_mul_ps(v, k), v, keep));
  }
  for (; i < n; ++i) out[i] = in[i] >= 0.0f ? in[i] : in[i] * slope;
}

#undef PANOPTIC_AVX2

}  // namespace

const KernelTable& Avx2Kernels() {
  static const KernelTable table{Isa::kAvx2, Conv2d,       AddKernel,
                                 MulKernel,  AffineKernel, LeakyReluKernel};
  return table;
}

#else  // !PANOPTIC_HAVE_X86

const KernelTable& Avx2Kernels() { return ScalarKernels(); }

#endif

}  // namespace panoptic::kernels
