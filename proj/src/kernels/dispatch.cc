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

#include <atomic>
#include <cstdlib>
#include <string>

#include "panoptic/errors.h"
#include "panoptic/kernels.h"

namespace panoptic::kernels {
namespace {

bool CpuHasAvx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa InitialIsa() {
  const Isa detected = DetectedIsa();
  if (const char* env = std::getenv("PANOPTIC_ISA")) {
    const std::string value(env);
    if (value == "scalar") return Isa::kScalar;
    if (value == "avx2" && detected == Isa::kAvx2) return Isa::kAvx2;
  }
  return detected;
}

std::atomic<Isa>& ActiveSlot() {
  static std::atomic<Isa> slot{InitialIsa()};
  return slot;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

Isa DetectedIsa() {
  static const Isa isa = CpuHasAvx2() ? Isa::kAvx2 : Isa::kScalar;
  return isa;
}

Isa ActiveIsa() { return ActiveSlot().load(std::memory_order_relaxed); }

void SetActiveIsa(Isa isa) {
  if (isa == Isa::kAvx2 && DetectedIsa() != Isa::kAvx2) {
    throw InputError("AVX2 kernels requested but the CPU does not support AVX2");
  }
  ActiveSlot().store(isa, std::memory_order_relaxed);
}

const KernelTable& Table(Isa isa) {
  return isa == Isa::kAvx2 ? Avx2Kernels() : ScalarKernels();
}

const KernelTable& Active() { return Table(ActiveIsa()); }

}  // namespace panoptic::kernels
