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

#ifndef PANOPTIC_PANOPTIC_MAP_H_
#define PANOPTIC_PANOPTIC_MAP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "panoptic/class_config.h"

namespace panoptic {

// Per-pixel (class id, instance id) labeling, row-major. Instance id 0 means
// "no instance"; void pixels carry the class table's void id.
struct PanopticMap {
  int height = 0;
  int width = 0;
  std::int32_t void_id = 255;
  std::vector<std::int32_t> class_map;
  std::vector<std::int32_t> instance_map;

  static PanopticMap Void(int height, int width, std::int32_t void_id);

  std::size_t size() const { return class_map.size(); }
  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width + x;
  }

  friend bool operator==(const PanopticMap&, const PanopticMap&) = default;
};

// Empty when `map` is valid for `classes`, otherwise a description of the
// first violation. Checks: buffer sizes; every class id known or void;
// instance ids only on thing classes; each instance id bound to one class;
// instance ids exactly 1..K.
std::string PanopticMapViolation(const PanopticMap& map,
                                 const ClassConfig& classes);

// Throws InvariantError carrying PanopticMapViolation().
void ValidatePanopticMap(const PanopticMap& map, const ClassConfig& classes);

}  // namespace panoptic

#endif  // PANOPTIC_PANOPTIC_MAP_H_
