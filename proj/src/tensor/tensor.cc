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

#include "panoptic/tensor.h"

#include <cmath>
#include <cstring>
#include <sstream>

#include "panoptic/errors.h"

namespace panoptic {
namespace {

void ValidateDims(const Dims& d) {
  if (d.n < 1 || d.c < 1 || d.h < 1 || d.w < 1) {
    throw ShapeError("tensor dims must all be >= 1, got " + d.ToString());
  }
}

}  // namespace

std::string Dims::ToString() const {
  std::ostringstream os;
  os << "(" << n << ", " << c << ", " << h << ", " << w << ")";
  return os.str();
}

Tensor::Tensor(Dims dims) : dims_(dims) {
  ValidateDims(dims_);
  data_.assign(dims_.size(), 0.0f);
}

Tensor::Tensor(Dims dims, std::vector<float> values)
    : dims_(dims), data_(std::move(values)) {
  ValidateDims(dims_);
  if (data_.size() != dims_.size()) {
    throw ShapeError("tensor of dims " + dims_.ToString() + " needs " +
                     std::to_string(dims_.size()) + " values, got " +
                     std::to_string(data_.size()));
  }
  if (!AllFinite()) {
    throw InputError("tensor of dims " + dims_.ToString() +
                     " contains a non-finite value");
  }
}

Tensor Tensor::Filled(Dims dims, float value) {
  if (!std::isfinite(value)) throw InputError("fill value must be finite");
  Tensor t(dims);
  std::fill(t.data_.begin(), t.data_.end(), value);
  return t;
}

bool Tensor::AllFinite() const {
  for (float v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool operator==(const Tensor& a, const Tensor& b) {
  return a.dims_ == b.dims_ && a.data_ == b.data_;
}

bool BitIdentical(const Tensor& a, const Tensor& b) {
  if (a.dims() != b.dims()) return false;
  return std::memcmp(a.data().data(), b.data().data(),
                     a.size() * sizeof(float)) == 0;
}

void RequireSameDims(const Dims& a, const Dims& b, const char* what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": dims " + a.ToString() + " vs " +
                     b.ToString());
  }
}

#ifndef NDEBUG
void DebugCheckFinite(const Tensor& t, const char* kernel) {
  if (!t.AllFinite()) {
    throw InvariantError(std::string(kernel) + " produced a non-finite value");
  }
}
#endif

std::string ConvSpec::ToString() const {
  std::ostringstream os;
  os << "kernel " << kernel.h << "x" << kernel.w << " stride " << stride
     << " dilation (" << dilation.h << "," << dilation.w << ") padding ";
  if (padding.same) {
    os << "same-zero";
  } else {
    os << "(" << padding.h << "," << padding.w << ")";
  }
  os << " groups " << groups << (bias ? " bias" : "");
  return os.str();
}

Tensor ConcatChannels(std::span<const Tensor> parts) {
  if (parts.empty()) throw ShapeError("ConcatChannels: no inputs");
  Dims out = parts.front().dims();
  out.c = 0;
  for (const Tensor& p : parts) {
    if (p.n() != out.n || p.h() != out.h || p.w() != out.w) {
      throw ShapeError("ConcatChannels: dims " + parts.front().dims().ToString() +
                       " vs " + p.dims().ToString());
    }
    out.c += p.c();
  }
  Tensor result(out);
  for (int n = 0; n < out.n; ++n) {
    int c0 = 0;
    for (const Tensor& p : parts) {
      for (int c = 0; c < p.c(); ++c) {
        auto src = p.plane(n, c);
        std::copy(src.begin(), src.end(), result.plane(n, c0 + c).begin());
      }
      c0 += p.c();
    }
  }
  return result;
}

Tensor SliceChannels(const Tensor& input, int begin, int count) {
  if (begin < 0 || count < 1 || begin + count > input.c()) {
    throw ShapeError("SliceChannels: [" + std::to_string(begin) + ", " +
                     std::to_string(begin + count) + ") out of range for dims " +
                     input.dims().ToString());
  }
  Dims out = input.dims();
  out.c = count;
  Tensor result(out);
  for (int n = 0; n < out.n; ++n) {
    for (int c = 0; c < count; ++c) {
      auto src = input.plane(n, begin + c);
      std::copy(src.begin(), src.end(), result.plane(n, c).begin());
    }
  }
  return result;
}

}  // namespace panoptic
