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

#include "panoptic/panoptic_png.h"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <map>

#include "json.hpp"
#include "panoptic/errors.h"

namespace panoptic {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<std::uint8_t> ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string(), "cannot open for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteBytes(const fs::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(path.string(), "cannot open for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw FormatError(path.string(), "write failed");
}

}  // namespace

std::uint32_t SegmentIdFor(std::int32_t class_id, bool is_thing,
                           std::int32_t instance) {
  if (is_thing && instance > 0) {
    return static_cast<std::uint32_t>(class_id) +
           1000u * static_cast<std::uint32_t>(instance);
  }
  return static_cast<std::uint32_t>(class_id) + 1u;
}

std::array<std::uint8_t, 3> SegmentIdToRgb(std::uint32_t id) {
  return {static_cast<std::uint8_t>(id & 0xff),
          static_cast<std::uint8_t>((id >> 8) & 0xff),
          static_cast<std::uint8_t>((id >> 16) & 0xff)};
}

std::uint32_t RgbToSegmentId(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint32_t>(r) + 256u * g + 65536u * b;
}

std::vector<std::uint8_t> EncodeRgbPng(std::span<const std::uint8_t> rgb,
                                       int height, int width) {
  if (rgb.size() != static_cast<std::size_t>(height) * width * 3) {
    throw ShapeError("EncodeRgbPng: buffer does not hold height*width*3 bytes");
  }
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, rgb.data(), 0, nullptr)) {
    throw InvariantError(std::string("png encode failed: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, rgb.data(), 0,
                                 nullptr)) {
    throw InvariantError(std::string("png encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> DecodeRgbPng(std::span<const std::uint8_t> png,
                                       int* height, int* width,
                                       const std::string& source) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, png.data(), png.size())) {
    const std::string why = image.message;
    png_image_free(&image);
    throw FormatError(source, "corrupt PNG: " + why);
  }
  if ((image.format & PNG_FORMAT_FLAG_COLOR) == 0 ||
      (image.format & PNG_FORMAT_FLAG_LINEAR) != 0) {
    png_image_free(&image);
    throw FormatError(source, "panoptic PNG must be 8-bit RGB");
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgb.data(), 0, nullptr)) {
    const std::string why = image.message;
    png_image_free(&image);
    throw FormatError(source, "corrupt PNG: " + why);
  }
  *height = static_cast<int>(image.height);
  *width = static_cast<int>(image.width);
  return rgb;
}

EncodedPanoptic EncodePanoptic(const PanopticMap& map, const ClassConfig& classes) {
  ValidatePanopticMap(map, classes);
  std::map<std::uint32_t, SegmentInfo> segments;
  std::vector<std::uint8_t> rgb(map.size() * 3, 0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const std::int32_t cls = map.class_map[i];
    if (cls == map.void_id) continue;
    const bool thing = classes.is_thing(cls);
    const std::int32_t inst = map.instance_map[i];
    const std::uint64_t id64 =
        thing && inst > 0 ? static_cast<std::uint64_t>(cls) + 1000ull * inst
                          : static_cast<std::uint64_t>(cls) + 1;
    if (id64 > kMaxSegmentId) {
      throw InputError("segment id " + std::to_string(id64) + " exceeds 2^24 - 1");
    }
    const auto id = static_cast<std::uint32_t>(id64);
    segments.try_emplace(id, SegmentInfo{id, cls, thing, thing ? inst : 0});
    const auto c = SegmentIdToRgb(id);
    std::copy(c.begin(), c.end(), rgb.begin() + 3 * i);
  }
  json list = json::array();
  for (const auto& [id, s] : segments) {
    list.push_back({{"id", s.id}, {"class_id", s.class_id},
                    {"is_thing", s.is_thing}, {"instance", s.instance}});
  }
  const json manifest = {{"format", "panoptic-segments"},
                         {"version", 1},
                         {"height", map.height},
                         {"width", map.width},
                         {"segments", std::move(list)}};
  return {EncodeRgbPng(rgb, map.height, map.width), manifest.dump(1) + "\n"};
}

PanopticMap DecodePanoptic(const EncodedPanoptic& encoded,
                           const ClassConfig& classes, const std::string& source) {
  int height = 0, width = 0;
  const std::vector<std::uint8_t> rgb =
      DecodeRgbPng(encoded.png, &height, &width, source);
  const std::string sidecar = source + " (manifest)";
  std::map<std::uint32_t, SegmentInfo> segments;
  try {
    const json doc = json::parse(encoded.manifest);
    if (doc.at("format") != "panoptic-segments" || doc.at("version") != 1) {
      throw FormatError(sidecar, "not a version 1 segment manifest");
    }
    if (doc.at("height").get<int>() != height || doc.at("width").get<int>() != width) {
      throw FormatError(sidecar, "manifest size does not match the PNG");
    }
    for (const json& s : doc.at("segments")) {
      SegmentInfo info{s.at("id").get<std::uint32_t>(), s.at("class_id").get<std::int32_t>(),
                       s.at("is_thing").get<bool>(), s.at("instance").get<std::int32_t>()};
      const std::string tag = "segment id " + std::to_string(info.id);
      const ClassInfo* cls = classes.find(info.class_id);
      if (info.id == 0 || info.id > kMaxSegmentId) {
        throw FormatError(sidecar, tag + " is out of range");
      }
      if (cls == nullptr) {
        throw FormatError(sidecar, tag + " names class " +
                                       std::to_string(info.class_id) +
                                       ", which the class config lacks");
      }
      if (cls->is_thing != info.is_thing) {
        throw FormatError(sidecar, tag + " disagrees with the class config on "
                                         "whether class " +
                                       std::to_string(info.class_id) + " is a thing");
      }
      if (info.instance < 0 || (!info.is_thing && info.instance != 0)) {
        throw FormatError(sidecar, tag + " has an invalid instance index");
      }
      if (!segments.emplace(info.id, info).second) {
        throw FormatError(sidecar, tag + " is listed twice");
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(sidecar, e.what());
  }
  PanopticMap map = PanopticMap::Void(height, width, classes.void_id());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const std::uint32_t id = RgbToSegmentId(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
    if (id == 0) continue;
    auto it = segments.find(id);
    if (it == segments.end()) {
      throw FormatError(source, "pixel " + std::to_string(i) + " carries segment id " +
                                    std::to_string(id) +
                                    ", which the manifest does not list");
    }
    map.class_map[i] = it->second.class_id;
    map.instance_map[i] = it->second.instance;
  }
  if (std::string why = PanopticMapViolation(map, classes); !why.empty()) {
    throw FormatError(source, why);
  }
  return map;
}

fs::path SidecarPath(const fs::path& png_path) {
  fs::path p = png_path;
  p.replace_extension(".json");
  return p;
}

void WritePanopticPng(const fs::path& png_path, const PanopticMap& map,
                      const ClassConfig& classes) {
  const EncodedPanoptic encoded = EncodePanoptic(map, classes);
  WriteBytes(png_path, encoded.png.data(), encoded.png.size());
  WriteBytes(SidecarPath(png_path), encoded.manifest.data(), encoded.manifest.size());
}

PanopticMap ReadPanopticPng(const fs::path& png_path, const ClassConfig& classes) {
  EncodedPanoptic encoded;
  encoded.png = ReadBytes(png_path);
  const auto manifest = ReadBytes(SidecarPath(png_path));
  encoded.manifest.assign(manifest.begin(), manifest.end());
  return DecodePanoptic(encoded, classes, png_path.string());
}

}  // namespace panoptic
