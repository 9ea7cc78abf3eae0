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

#ifndef PANOPTIC_TENSOR_H_
#define PANOPTIC_TENSOR_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace panoptic {

// Shape of a rank-4 tensor in (batch, channels, height, width) order.
struct Dims {
  int n = 1;
  int c = 1;
  int h = 1;
  int w = 1;

  std::size_t size() const {
    return static_cast<std::size_t>(n) * c * h * w;
  }
  std::size_t plane() const { return static_cast<std::size_t>(h) * w; }
  std::string ToString() const;
  friend bool operator==(const Dims&, const Dims&) = default;
};

// Dense float32 tensor, row-major with width fastest. Every dimension is at
// least one and every value is finite.
class Tensor {
 public:
  // A single zero.
  Tensor() : Tensor(Dims{}) {}
  explicit Tensor(Dims dims);
  // Takes ownership of `values`; throws ShapeError on a length mismatch and
  // InputError on a non-finite value.
  Tensor(Dims dims, std::vector<float> values);

  static Tensor Filled(Dims dims, float value);

  const Dims& dims() const { return dims_; }
  int n() const { return dims_.n; }
  int c() const { return dims_.c; }
  int h() const { return dims_.h; }
  int w() const { return dims_.w; }
  std::size_t size() const { return data_.size(); }

  std::span<const float> data() const { return data_; }
  std::span<float> mutable_data() { return data_; }

  std::size_t offset(int n, int c, int y, int x) const {
    return ((static_cast<std::size_t>(n) * dims_.c + c) * dims_.h + y) *
               dims_.w + x;
  }
  float at(int n, int c, int y, int x) const { return data_[offset(n, c, y, x)]; }
  float& at(int n, int c, int y, int x) { return data_[offset(n, c, y, x)]; }

  // The H*W plane of one (batch, channel) pair.
  std::span<const float> plane(int n, int c) const {
    return std::span<const float>(data_).subspan(offset(n, c, 0, 0),
                                                 dims_.plane());
  }
  std::span<float> plane(int n, int c) {
    return std::span<float>(data_).subspan(offset(n, c, 0, 0), dims_.plane());
  }

  bool AllFinite() const;

  friend bool operator==(const Tensor& a, const Tensor& b);

 private:
  Dims dims_;
  std::vector<float> data_;
};

// Bit-level equality (distinguishes -0.0 from 0.0).
bool BitIdentical(const Tensor& a, const Tensor& b);

// Throws ShapeError naming both shapes when they differ.
void RequireSameDims(const Dims& a, const Dims& b, const char* what);

// Debug builds re-check finiteness after every kernel.
#ifndef NDEBUG
void DebugCheckFinite(const Tensor& t, const char* kernel);
#else
inline void DebugCheckFinite(const Tensor&, const char*) {}
#endif

struct KernelSize {
  int h = 3;
  int w = 3;
};

struct Dilation {
  int h = 1;
  int w = 1;
};

// "Same" zero padding keeps the spatial size at stride 1; explicit padding
// pads symmetrically by (h, w).
struct Padding {
  bool same = true;
  int h = 0;
  int w = 0;

  static Padding SameZero() { return {}; }
  static Padding Explicit(int ph, int pw) { return {false, ph, pw}; }
};

struct ConvSpec {
  KernelSize kernel;
  int stride = 1;
  Dilation dilation;
  Padding padding;
  int groups = 1;
  bool bias = false;

  static ConvSpec Pointwise() { return {{1, 1}, 1, {1, 1}, {}, 1, false}; }
  static ConvSpec Depthwise(int channels, KernelSize k = {3, 3},
                            Dilation d = {1, 1}) {
    return {k, 1, d, {}, channels, false};
  }
  std::string ToString() const;
};

// Standard dilated convolution. `weights` has dims
// (out_channels, in_channels / groups, kernel.h, kernel.w); `bias` must be
// non-empty exactly when spec.bias is set. Reductions accumulate in double
// in a fixed (input channel, ky, kx) order, so results are bit-reproducible.
Tensor Conv2d(const Tensor& input, const Tensor& weights, const ConvSpec& spec,
              std::span<const float> bias = {});

// Output spatial size of Conv2d for one axis.
int ConvOutputSize(int in, int kernel, int stride, int dilation, int pad_total);

// Depthwise conv (groups = channels) with `spec`'s geometry followed by an
// unbiased 1x1 pointwise conv. `spec.bias` applies to the pointwise stage.
Tensor DepthwiseSeparableConv(const Tensor& input, const Tensor& dw_weights,
                              const Tensor& pw_weights, const ConvSpec& spec,
                              std::span<const float> bias = {});

// Half-pixel-center bilinear sampling with edge clamping.
Tensor BilinearResize(const Tensor& input, int out_h, int out_w);

enum class ActivationKind { kLeakyRelu, kSigmoid, kChannelSoftmax };

struct Activation {
  ActivationKind kind = ActivationKind::kLeakyRelu;
  float slope = 0.01f;

  static Activation LeakyRelu(float slope = 0.01f) {
    return {ActivationKind::kLeakyRelu, slope};
  }
  static Activation Sigmoid() { return {ActivationKind::kSigmoid, 0.0f}; }
  static Activation ChannelSoftmax() {
    return {ActivationKind::kChannelSoftmax, 0.0f};
  }
};

Tensor Activate(const Tensor& input, Activation activation);

// Inference-mode normalization folded to out[c] = in[c] * scale[c] + shift[c].
Tensor AffineNorm(const Tensor& input, std::span<const float> scale,
                  std::span<const float> shift);

Tensor Add(const Tensor& a, const Tensor& b);
Tensor Multiply(const Tensor& a, const Tensor& b);

// Concatenates along the channel axis; all inputs share n, h, w.
Tensor ConcatChannels(std::span<const Tensor> parts);

// Channels [begin, begin + count) of `input`.
Tensor SliceChannels(const Tensor& input, int begin, int count);

}  // namespace panoptic

#endif  // PANOPTIC_TENSOR_H_
