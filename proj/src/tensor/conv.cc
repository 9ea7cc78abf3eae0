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

#include <string>

#include "panoptic/errors.h"
#include "panoptic/kernels.h"
#include "panoptic/tensor.h"

namespace panoptic {
namespace {

struct Pads {
  int top, left, total_h, total_w;
};

Pads ResolvePadding(const ConvSpec& spec) {
  if (spec.padding.same) {
    const int th = spec.dilation.h * (spec.kernel.h - 1);
    const int tw = spec.dilation.w * (spec.kernel.w - 1);
    return {th / 2, tw / 2, th, tw};
  }
  return {spec.padding.h, spec.padding.w, 2 * spec.padding.h,
          2 * spec.padding.w};
}

void ValidateSpec(const ConvSpec& spec) {
  if (spec.kernel.h < 1 || spec.kernel.w < 1 || spec.stride < 1 ||
      spec.dilation.h < 1 || spec.dilation.w < 1 || spec.groups < 1 ||
      (!spec.padding.same && (spec.padding.h < 0 || spec.padding.w < 0))) {
    throw ShapeError("invalid conv spec: " + spec.ToString());
  }
}

}  // namespace

int ConvOutputSize(int in, int kernel, int stride, int dilation,
                   int pad_total) {
  const int span = in + pad_total - dilation * (kernel - 1) - 1;
  if (span < 0) return 0;
  return span / stride + 1;
}

Tensor Conv2d(const Tensor& input, const Tensor& weights, const ConvSpec& spec,
              std::span<const float> bias) {
  ValidateSpec(spec);
  const Dims& in = input.dims();
  const Dims& wd = weights.dims();
  if (in.c % spec.groups != 0 || wd.n % spec.groups != 0 ||
      wd.c != in.c / spec.groups || wd.h != spec.kernel.h ||
      wd.w != spec.kernel.w) {
    throw ShapeError("conv2d: input dims " + in.ToString() +
                     " incompatible with weight dims " + wd.ToString() +
                     " under " + spec.ToString());
  }
  if (spec.bias != !bias.empty() ||
      (!bias.empty() && bias.size() != static_cast<std::size_t>(wd.n))) {
    throw ShapeError("conv2d: bias of length " + std::to_string(bias.size()) +
                     " does not match weight dims " + wd.ToString() + " under " +
                     spec.ToString());
  }
  const Pads pads = ResolvePadding(spec);
  const int out_h = ConvOutputSize(in.h, spec.kernel.h, spec.stride,
                                   spec.dilation.h, pads.total_h);
  const int out_w = ConvOutputSize(in.w, spec.kernel.w, spec.stride,
                                   spec.dilation.w, pads.total_w);
  if (out_h < 1 || out_w < 1) {
    throw ShapeError("conv2d: input dims " + in.ToString() +
                     " too small for weight dims " + wd.ToString() + " under " +
                     spec.ToString());
  }

  const kernels::ConvGeometry geometry{
      in.c,         in.h,          in.w,      wd.n,     out_h,
      out_w,        spec.kernel.h, spec.kernel.w, spec.stride,
      spec.dilation.h, spec.dilation.w, pads.top, pads.left, spec.groups};
  Tensor out(Dims{in.n, wd.n, out_h, out_w});
  const auto& table = kernels::Active();
  const std::size_t in_item = static_cast<std::size_t>(in.c) * in.h * in.w;
  const std::size_t out_item = static_cast<std::size_t>(wd.n) * out_h * out_w;
  for (int n = 0; n < in.n; ++n) {
    table.conv2d(geometry, input.data().data() + n * in_item,
                 weights.data().data(), bias.empty() ? nullptr : bias.data(),
                 out.mutable_data().data() + n * out_item);
  }
  DebugCheckFinite(out, "conv2d");
  return out;
}

Tensor DepthwiseSeparableConv(const Tensor& input, const Tensor& dw_weights,
                              const Tensor& pw_weights, const ConvSpec& spec,
                              std::span<const float> bias) {
  ConvSpec depthwise = spec;
  depthwise.groups = input.c();
  depthwise.bias = false;
  if (dw_weights.n() != input.c() || dw_weights.c() != 1) {
    throw ShapeError("depthwise_separable_conv: depthwise weights " +
                     dw_weights.dims().ToString() + " do not match input " +
                     input.dims().ToString());
  }
  if (pw_weights.h() != 1 || pw_weights.w() != 1) {
    throw ShapeError("depthwise_separable_conv: pointwise weights " +
                     pw_weights.dims().ToString() + " are not 1x1");
  }
  ConvSpec pointwise = ConvSpec::Pointwise();
  pointwise.bias = spec.bias;
  return Conv2d(Conv2d(input, dw_weights, depthwise), pw_weights, pointwise,
                bias);
}

}  // namespace panoptic
