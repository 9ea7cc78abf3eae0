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

#include "panoptic/panoptic_map.h"

#include <map>

#include "panoptic/errors.h"

namespace panoptic {

PanopticMap PanopticMap::Void(int height, int width, std::int32_t void_id) {
  PanopticMap m;
  m.height = height;
  m.width = width;
  m.void_id = void_id;
  const auto n = static_cast<std::size_t>(height) * width;
  m.class_map.assign(n, void_id);
  m.instance_map.assign(n, 0);
  return m;
}

std::string PanopticMapViolation(const PanopticMap& map,
                                 const ClassConfig& classes) {
  if (map.height < 1 || map.width < 1) return "map has no pixels";
  const auto n = static_cast<std::size_t>(map.height) * map.width;
  if (map.class_map.size() != n || map.instance_map.size() != n) {
    return "class/instance buffers do not hold height*width entries";
  }
  if (map.void_id != classes.void_id()) {
    return "map void id " + std::to_string(map.void_id) +
           " differs from class config void id " +
           std::to_string(classes.void_id());
  }
  std::map<std::int32_t, std::int32_t> instance_class;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t cls = map.class_map[i];
    const std::int32_t inst = map.instance_map[i];
    if (inst < 0) return "negative instance id at pixel " + std::to_string(i);
    if (cls == map.void_id) {
      if (inst != 0) return "void pixel " + std::to_string(i) + " carries an instance id";
      continue;
    }
    const ClassInfo* info = classes.find(cls);
    if (info == nullptr) {
      return "unknown class id " + std::to_string(cls) + " at pixel " + std::to_string(i);
    }
    if (inst == 0) continue;
    if (!info->is_thing) {
      return "stuff class " + std::to_string(cls) + " carries instance id " +
             std::to_string(inst) + " at pixel " + std::to_string(i);
    }
    auto [it, inserted] = instance_class.emplace(inst, cls);
    if (!inserted && it->second != cls) {
      return "instance id " + std::to_string(inst) + " spans classes " +
             std::to_string(it->second) + " and " + std::to_string(cls);
    }
  }
  std::int32_t expected = 1;
  for (const auto& [inst, cls] : instance_class) {
    if (inst != expected) {
      return "instance ids are not contiguous: expected " +
             std::to_string(expected) + ", found " + std::to_string(inst);
    }
    ++expected;
  }
  return {};
}

void ValidatePanopticMap(const PanopticMap& map, const ClassConfig& classes) {
  if (std::string why = PanopticMapViolation(map, classes); !why.empty()) {
    throw InvariantError("invalid panoptic map: " + why);
  }
}

}  // namespace panoptic
