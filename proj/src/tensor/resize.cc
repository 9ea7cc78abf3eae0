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
#include "panoptic/tensor.h"

namespace panoptic {
namespace {

struct Tap {
  int lo;
  int hi;
  double frac;
};

// Source taps for half-pixel-center sampling along one axis.
std::vector<Tap> AxisTaps(int in, int out) {
  std::vector<Tap> taps(static_cast<std::size_t>(out));
  const double scale = static_cast<double>(in) / out;
  for (int i = 0; i < out; ++i) {
    double src = (i + 0.5) * scale - 0.5;
    if (src < 0.0) src = 0.0;
    int lo = static_cast<int>(std::floor(src));
    double frac = src - lo;
    if (lo >= in - 1) {
      lo = in - 1;
      frac = 0.0;
    }
    taps[i] = {lo, std::min(lo + 1, in - 1), frac};
  }
  return taps;
}

}  // namespace

Tensor BilinearResize(const Tensor& input, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) {
    throw ShapeError("bilinear_resize: target " + std::to_string(out_h) + "x" +
                     std::to_string(out_w) + " for input " +
                     input.dims().ToString());
  }
  const std::vector<Tap> ys = AxisTaps(input.h(), out_h);
  const std::vector<Tap> xs = AxisTaps(input.w(), out_w);
  Tensor out(Dims{input.n(), input.c(), out_h, out_w});
  const int in_w = input.w();
  for (int n = 0; n < input.n(); ++n) {
    for (int c = 0; c < input.c(); ++c) {
      auto src = input.plane(n, c);
      auto dst = out.plane(n, c);
      for (int y = 0; y < out_h; ++y) {
        const Tap& ty = ys[y];
        const float* r0 = src.data() + static_cast<std::size_t>(ty.lo) * in_w;
        const float* r1 = src.data() + static_cast<std::size_t>(ty.hi) * in_w;
        for (int x = 0; x < out_w; ++x) {
          const Tap& tx = xs[x];
          // a + t * (b - a) keeps constant regions exact.
          const double a = r0[tx.lo], b = r0[tx.hi];
          const double c0 = r1[tx.lo], d = r1[tx.hi];
          const double top = a + tx.frac * (b - a);
          const double bottom = c0 + tx.frac * (d - c0);
          dst[static_cast<std::size_t>(y) * out_w + x] =
              static_cast<float>(top + ty.frac * (bottom - top));
        }
      }
    }
  }
  DebugCheckFinite(out, "bilinear_resize");
  return out;
}

}  // namespace panoptic
