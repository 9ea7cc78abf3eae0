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

#ifndef PANOPTIC_KERNELS_H_
#define PANOPTIC_KERNELS_H_

// Inner loops behind the tensor operations. Each instruction set provides the
// same table of entry points; the scalar table is the reference and every
// other table must produce bit-identical results.

#include <cstddef>
#include <string_view>

namespace panoptic::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

// Best instruction set supported by the running CPU.
Isa DetectedIsa();

// Instruction set used by the tensor operations. Defaults to DetectedIsa(),
// or to the value of PANOPTIC_ISA ("scalar" or "avx2") when set.
Isa ActiveIsa();

// Throws InputError when `isa` is not supported on this CPU.
void SetActiveIsa(Isa isa);

// Geometry of one batch item of a grouped, dilated convolution.
struct ConvGeometry {
  int in_c, in_h, in_w;
  int out_c, out_h, out_w;
  int kernel_h, kernel_w;
  int stride;
  int dilation_h, dilation_w;
  int pad_top, pad_left;
  int groups;
};

struct KernelTable {
  Isa isa;
  // `bias` may be null. `in` is in_c*in_h*in_w, `out` is out_c*out_h*out_w.
  void (*conv2d)(const ConvGeometry& g, const float* in, const float* weights,
                 const float* bias, float* out);
  void (*add)(const float* a, const float* b, float* out, std::size_t n);
  void (*mul)(const float* a, const float* b, float* out, std::size_t n);
  void (*affine)(const float* in, float scale, float shift, float* out,
                 std::size_t n);
  void (*leaky_relu)(const float* in, float slope, float* out, std::size_t n);
};

const KernelTable& ScalarKernels();
// Only valid to call when DetectedIsa() == Isa::kAvx2.
const KernelTable& Avx2Kernels();
const KernelTable& Table(Isa isa);
const KernelTable& Active();

}  // namespace panoptic::kernels

#endif  // PANOPTIC_KERNELS_H_
