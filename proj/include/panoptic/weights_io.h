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

#ifndef PANOPTIC_WEIGHTS_IO_H_
#define PANOPTIC_WEIGHTS_IO_H_

// Weight bundle: a directory holding manifest.json plus one PTSR file per
// parameter array.
//
//   {
//     "format": "panoptic-weights", "version": 1,
//     "encoder_channels": [c4, c8, c16, c32], "n_classes": N,
//     "layers": {
//       "<layer id>": {"weights": "<file>", "pointwise": "<file>",
//                      "bias": "<file>", "scale": "<file>", "shift": "<file>"}
//     }
//   }
//
// "pointwise" appears only for separable layers; "bias", "scale" and "shift"
// only when present. Vectors are stored as 1 x C x 1 x 1 tensors. Layer ids:
//   fpn.td_lateral.<l>.conv  fpn.bu_lateral.<l>.conv  fpn.output.<l>.conv
//   head.dpc32.<layer>  head.dpc16.<layer>  head.proj32  head.proj16
//   head.lsfe8.<layer>  head.lsfe4.<layer>  head.mc16.<layer>  head.mc8.<layer>
//   head.classifier
// with <l> in 0..3 (x4 .. x32) and <layer> the block's layer names.

#include <filesystem>

#include "panoptic/semantic.h"

namespace panoptic {

void WriteNetworkWeights(const std::filesystem::path& dir,
                         const NetworkWeights& weights);

// Throws FormatError/InputError on a malformed bundle; the result has passed
// ValidateNetworkWeights.
NetworkWeights ReadNetworkWeights(const std::filesystem::path& dir);

}  // namespace panoptic

#endif  // PANOPTIC_WEIGHTS_IO_H_
