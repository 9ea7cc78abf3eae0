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

#include "panoptic/instprep.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "panoptic/errors.h"
#include "panoptic/ptsr.h"

namespace panoptic {

namespace fs = std::filesystem;
using nlohmann::json;

void FusionConfig::Validate() const {
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    throw InputError("confidence threshold must lie in [0, 1]");
  }
  if (!(overlap_threshold >= 0.0 && overlap_threshold <= 1.0)) {
    throw InputError("overlap threshold must lie in [0, 1]");
  }
  if (min_stuff_area < 0) throw InputError("minimum stuff area must be >= 0");
}

PixelBox ToPixelBox(const Box& box, int image_h, int image_w) {
  auto clamp = [](double v, int hi) {
    return static_cast<int>(std::clamp(std::round(v), 0.0, static_cast<double>(hi)));
  };
  const PixelBox p{clamp(box.x1, image_w), clamp(box.y1, image_h),
                   clamp(box.x2, image_w), clamp(box.y2, image_h)};
  if (p.width() <= 1 || p.height() <= 1) {
    throw InputError("degenerate box [" + std::to_string(box.x1) + ", " +
                     std::to_string(box.y1) + ", " + std::to_string(box.x2) + ", " +
                     std::to_string(box.y2) + "] covers " + std::to_string(p.width()) +
                     "x" + std::to_string(p.height()) + " pixels of a " +
                     std::to_string(image_w) + "x" + std::to_string(image_h) + " image");
  }
  return p;
}

Tensor PasteMaskLogits(const InstancePrediction& inst, int image_h, int image_w) {
  if (inst.mask_logits.n() != 1 || inst.mask_logits.c() != 1) {
    throw ShapeError("mask logits must be 1 x 1 x M x M, got " +
                     inst.mask_logits.dims().ToString());
  }
  const PixelBox box = ToPixelBox(inst.bbox, image_h, image_w);
  const Tensor resized = BilinearResize(inst.mask_logits, box.height(), box.width());
  Tensor canvas(Dims{1, 1, image_h, image_w});
  for (int y = 0; y < box.height(); ++y) {
    for (int x = 0; x < box.width(); ++x) {
      canvas.at(0, 0, box.y1 + y, box.x1 + x) = resized.at(0, 0, y, x);
    }
  }
  return canvas;
}

std::vector<InstancePrediction> FilterAndSort(std::vector<InstancePrediction> instances,
                                              const FusionConfig& cfg) {
  std::erase_if(instances, [&cfg](const InstancePrediction& i) {
    return i.score < cfg.confidence_threshold;
  });
  std::stable_sort(instances.begin(), instances.end(),
                   [](const InstancePrediction& a, const InstancePrediction& b) {
                     return a.score > b.score;
                   });
  return instances;
}

std::vector<std::uint8_t> BinaryMask(const Tensor& logits) {
  std::vector<std::uint8_t> mask(logits.size());
  auto v = logits.data();
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = v[i] > 0.0f ? 1 : 0;
  return mask;
}

std::vector<PastedInstance> SuppressOverlaps(std::vector<PastedInstance> sorted,
                                             const FusionConfig& cfg,
                                             std::vector<SuppressionDecision>* decisions) {
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].prediction.score > sorted[i - 1].prediction.score) {
      throw InputError("suppress_overlaps: instances are not sorted by score");
    }
  }
  std::vector<PastedInstance> kept;
  std::vector<std::uint8_t> claimed;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const std::vector<std::uint8_t> mask = BinaryMask(sorted[i].logits);
    if (claimed.empty()) claimed.assign(mask.size(), 0);
    if (mask.size() != claimed.size()) {
      throw ShapeError("suppress_overlaps: pasted logits differ in size");
    }
    std::int64_t area = 0, overlap = 0;
    for (std::size_t p = 0; p < mask.size(); ++p) {
      area += mask[p];
      overlap += mask[p] & claimed[p];
    }
    const bool retained =
        area == 0 || static_cast<double>(overlap) / static_cast<double>(area) <=
                         cfg.overlap_threshold;
    if (decisions != nullptr) decisions->push_back({i, area, overlap, retained});
    if (!retained) continue;
    for (std::size_t p = 0; p < mask.size(); ++p) claimed[p] |= mask[p];
    kept.push_back(std::move(sorted[i]));
  }
  return kept;
}

Tensor BuildMlb(const Tensor& semantic_logits, const InstancePrediction& inst,
                const ClassConfig& classes) {
  const auto channel = classes.channel_of(inst.class_id);
  if (!channel || semantic_logits.c() != classes.size() || semantic_logits.n() != 1) {
    throw InputError("class " + std::to_string(inst.class_id) +
                     " has no channel in semantic logits of dims " +
                     semantic_logits.dims().ToString());
  }
  const int h = semantic_logits.h(), w = semantic_logits.w();
  const PixelBox box = ToPixelBox(inst.bbox, h, w);
  Tensor out(Dims{1, 1, h, w});
  for (int y = box.y1; y < box.y2; ++y) {
    for (int x = box.x1; x < box.x2; ++x) {
      out.at(0, 0, y, x) = semantic_logits.at(0, *channel, y, x);
    }
  }
  return out;
}

std::vector<ImageRecord> LoadInstanceManifest(const fs::path& path,
                                              const ClassConfig& classes) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string(), "cannot open instance manifest");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string(), e.what());
  }
  const fs::path base = path.parent_path();
  std::vector<ImageRecord> images;
  try {
    if (doc.at("format") != "panoptic-instances" || doc.at("version") != 1) {
      throw FormatError(path.string(), "not a version 1 instance manifest");
    }
    for (const json& img : doc.at("images")) {
      ImageRecord record;
      record.name = img.at("name").get<std::string>();
      if (record.name.empty() || record.name.find('/') != std::string::npos) {
        throw FormatError(path.string(), "image name '" + record.name + "' is not a plain file stem");
      }
      record.semantic = base / img.at("semantic").get<std::string>();
      for (const json& rec : img.at("instances")) {
        InstancePrediction inst;
        inst.class_id = rec.at("class_id").get<std::int32_t>();
        if (!classes.is_thing(inst.class_id)) {
          throw FormatError(path.string(), "image " + record.name + ": instance class " +
                                               std::to_string(inst.class_id) +
                                               " is not a thing class");
        }
        inst.score = rec.at("score").get<double>();
        if (!(inst.score >= 0.0 && inst.score <= 1.0)) {
          throw FormatError(path.string(), "image " + record.name + ": score outside [0, 1]");
        }
        const auto b = rec.at("bbox").get<std::array<double, 4>>();
        inst.bbox = {b[0], b[1], b[2], b[3]};
        if (!(inst.bbox.x2 > inst.bbox.x1 && inst.bbox.y2 > inst.bbox.y1)) {
          throw FormatError(path.string(), "image " + record.name + ": bbox needs x2 > x1 and y2 > y1");
        }
        inst.mask_logits = ReadPtsr(base / rec.at("mask").get<std::string>());
        record.instances.push_back(std::move(inst));
      }
      images.push_back(std::move(record));
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string(), e.what());
  }
  return images;
}

void WriteInstanceManifest(const fs::path& dir, const std::string& manifest_name,
                           const std::vector<ImageRecord>& images) {
  fs::create_directories(dir / "masks");
  json list = json::array();
  for (const ImageRecord& img : images) {
    json instances = json::array();
    for (std::size_t k = 0; k < img.instances.size(); ++k) {
      const InstancePrediction& inst = img.instances[k];
      const std::string mask = "masks/" + img.name + "_" + std::to_string(k) + ".ptsr";
      WritePtsr(dir / mask, inst.mask_logits);
      instances.push_back({{"class_id", inst.class_id},
                           {"score", inst.score},
                           {"bbox", {inst.bbox.x1, inst.bbox.y1, inst.bbox.x2, inst.bbox.y2}},
                           {"mask", mask}});
    }
    list.push_back({{"name", img.name},
                    {"semantic", img.semantic.lexically_relative(dir).generic_string()},
                    {"instances", std::move(instances)}});
  }
  const json doc = {{"format", "panoptic-instances"}, {"version", 1}, {"images", list}};
  std::ofstream out(dir / manifest_name, std::ios::trunc);
  if (!out) throw FormatError((dir / manifest_name).string(), "cannot write");
  out << doc.dump(2) << "\n";
}

}  // namespace panoptic
