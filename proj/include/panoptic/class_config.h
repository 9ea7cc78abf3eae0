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

#ifndef PANOPTIC_CLASS_CONFIG_H_
#define PANOPTIC_CLASS_CONFIG_H_

// Class table. JSON schema, version 1:
//
//   {
//     "format": "panoptic-classes", "version": 1,
//     "void_id": 255,
//     "n_stuff": 11, "n_thing": 8,          (optional; checked when present)
//     "classes": [
//       {"id": 0, "name": "road", "thing": false, "color": [128, 64, 128]},
//       ...
//     ]
//   }
//
// The list order is the channel order of semantic logits. Class ids must be
// unique, lie in [0, 998] and differ from void_id.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace panoptic {

inline constexpr std::int32_t kMaxClassId = 998;

struct ClassInfo {
  std::int32_t id = 0;
  std::string name;
  bool is_thing = false;
  std::array<std::uint8_t, 3> color{0, 0, 0};
};

class ClassConfig {
 public:
  // Throws InputError on duplicate ids, an id equal to void_id or out of
  // range, or an empty list.
  ClassConfig(std::vector<ClassInfo> classes, std::int32_t void_id);

  // Cityscapes 19 training classes: 11 stuff then 8 things, void 255.
  static ClassConfig Cityscapes();

  static ClassConfig FromJson(std::string_view text, const std::string& source);
  static ClassConfig Load(const std::filesystem::path& path);
  std::string ToJson() const;

  const std::vector<ClassInfo>& classes() const { return classes_; }
  std::int32_t void_id() const { return void_id_; }
  int size() const { return static_cast<int>(classes_.size()); }
  int n_stuff() const { return n_stuff_; }
  int n_thing() const { return n_thing_; }

  // Channel (list position) of a class id.
  std::optional<int> channel_of(std::int32_t id) const;
  const ClassInfo* find(std::int32_t id) const;
  bool is_thing(std::int32_t id) const;
  bool is_stuff(std::int32_t id) const;
  // Channels of stuff classes, in list order.
  std::vector<int> stuff_channels() const;

 private:
  std::vector<ClassInfo> classes_;
  std::int32_t void_id_;
  int n_stuff_ = 0;
  int n_thing_ = 0;
};

}  // namespace panoptic

#endif  // PANOPTIC_CLASS_CONFIG_H_
