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

#include "panoptic/class_config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "panoptic/errors.h"

namespace panoptic {

using nlohmann::json;

ClassConfig::ClassConfig(std::vector<ClassInfo> classes, std::int32_t void_id)
    : classes_(std::move(classes)), void_id_(void_id) {
  if (classes_.empty()) throw InputError("class config lists no classes");
  std::set<std::int32_t> seen;
  for (const ClassInfo& c : classes_) {
    if (c.id < 0 || c.id > kMaxClassId) {
      throw InputError("class id " + std::to_string(c.id) + " ('" + c.name +
                       "') outside [0, " + std::to_string(kMaxClassId) + "]");
    }
    if (c.id == void_id_) {
      throw InputError("class id " + std::to_string(c.id) + " ('" + c.name +
                       "') equals the void id");
    }
    if (!seen.insert(c.id).second) {
      throw InputError("duplicate class id " + std::to_string(c.id) + " ('" +
                       c.name + "')");
    }
    (c.is_thing ? n_thing_ : n_stuff_)++;
  }
}

ClassConfig ClassConfig::Cityscapes() {
  return ClassConfig(
      {
          {0, "road", false, {128, 64, 128}},
          {1, "sidewalk", false, {244, 35, 232}},
          {2, "building", false, {70, 70, 70}},
          {3, "wall", false, {102, 102, 156}},
          {4, "fence", false, {190, 153, 153}},
          {5, "pole", false, {153, 153, 153}},
          {6, "traffic light", false, {250, 170, 30}},
          {7, "traffic sign", false, {220, 220, 0}},
          {8, "vegetation", false, {107, 142, 35}},
          {9, "terrain", false, {152, 251, 152}},
          {10, "sky", false, {70, 130, 180}},
          {11, "person", true, {220, 20, 60}},
          {12, "rider", true, {255, 0, 0}},
          {13, "car", true, {0, 0, 142}},
          {14, "truck", true, {0, 0, 70}},
          {15, "bus", true, {0, 60, 100}},
          {16, "train", true, {0, 80, 100}},
          {17, "motorcycle", true, {0, 0, 230}},
          {18, "bicycle", true, {119, 11, 32}},
      },
      255);
}

ClassConfig ClassConfig::FromJson(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(source, e.what());
  }
  try {
    if (doc.at("format") != "panoptic-classes" || doc.at("version") != 1) {
      throw FormatError(source, "not a version 1 class config");
    }
    std::vector<ClassInfo> classes;
    for (const json& c : doc.at("classes")) {
      ClassInfo info;
      info.id = c.at("id").get<std::int32_t>();
      info.name = c.at("name").get<std::string>();
      info.is_thing = c.at("thing").get<bool>();
      if (c.contains("color")) info.color = c.at("color").get<std::array<std::uint8_t, 3>>();
      classes.push_back(std::move(info));
    }
    ClassConfig config(std::move(classes), doc.at("void_id").get<std::int32_t>());
    if (doc.contains("n_stuff") && doc.at("n_stuff").get<int>() != config.n_stuff()) {
      throw FormatError(source, "n_stuff is " + doc.at("n_stuff").dump() +
                                    " but the list holds " +
                                    std::to_string(config.n_stuff()) + " stuff classes");
    }
    if (doc.contains("n_thing") && doc.at("n_thing").get<int>() != config.n_thing()) {
      throw FormatError(source, "n_thing is " + doc.at("n_thing").dump() +
                                    " but the list holds " +
                                    std::to_string(config.n_thing()) + " thing classes");
    }
    return config;
  } catch (const json::exception& e) {
    throw FormatError(source, e.what());
  } catch (const FormatError&) {
    throw;
  } catch (const InputError& e) {
    throw FormatError(source, e.what());
  }
}

ClassConfig ClassConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string(), "cannot open class config");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str(), path.string());
}

std::string ClassConfig::ToJson() const {
  json classes = json::array();
  for (const ClassInfo& c : classes_) {
    classes.push_back({{"id", c.id}, {"name", c.name}, {"thing", c.is_thing},
                       {"color", c.color}});
  }
  const json doc = {{"format", "panoptic-classes"}, {"version", 1},
                    {"void_id", void_id_},          {"n_stuff", n_stuff_},
                    {"n_thing", n_thing_},          {"classes", classes}};
  return doc.dump(2) + "\n";
}

std::optional<int> ClassConfig::channel_of(std::int32_t id) const {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].id == id) return static_cast<int>(i);
  }
  return std::nullopt;
}

const ClassInfo* ClassConfig::find(std::int32_t id) const {
  auto ch = channel_of(id);
  return ch ? &classes_[*ch] : nullptr;
}

bool ClassConfig::is_thing(std::int32_t id) const {
  const ClassInfo* c = find(id);
  return c != nullptr && c->is_thing;
}

bool ClassConfig::is_stuff(std::int32_t id) const {
  const ClassInfo* c = find(id);
  return c != nullptr && !c->is_thing;
}

std::vector<int> ClassConfig::stuff_channels() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (!classes_[i].is_thing) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace panoptic
