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

#include "panoptic/fixture.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "panoptic/errors.h"
#include "panoptic/panoptic_png.h"
#include "panoptic/ptsr.h"

namespace panoptic {
namespace {

namespace fs = std::filesystem;

struct Rect {
  int x0 = 0, y0 = 0, w = 0, h = 0;
};

Rect RandomRect(Rng& rng, int max_w, int max_h, int min_side, int area_w, int area_h) {
  Rect r;
  r.w = rng.UniformInt(min_side, std::max(min_side, max_w));
  r.h = rng.UniformInt(min_side, std::max(min_side, max_h));
  r.x0 = rng.UniformInt(0, area_w - r.w);
  r.y0 = rng.UniformInt(0, area_h - r.h);
  return r;
}

void Paint(PanopticMap& map, const Rect& r, std::int32_t class_id, std::int32_t instance) {
  for (int y = r.y0; y < r.y0 + r.h; ++y) {
    for (int x = r.x0; x < r.x0 + r.w; ++x) {
      map.class_map[map.index(y, x)] = class_id;
      map.instance_map[map.index(y, x)] = instance;
    }
  }
}

std::vector<std::int32_t> IdsWhere(const ClassConfig& classes, bool thing) {
  std::vector<std::int32_t> ids;
  for (const ClassInfo& c : classes.classes()) {
    if (c.is_thing == thing) ids.push_back(c.id);
  }
  return ids;
}

std::int32_t Pick(Rng& rng, const std::vector<std::int32_t>& ids) {
  return ids[rng.UniformInt(0, static_cast<int>(ids.size()) - 1)];
}

}  // namespace

ClassConfig ToyClasses() {
  std::vector<ClassInfo> list = {
      {0, "road", false, {128, 64, 128}}, {1, "building", false, {70, 70, 70}},
      {2, "vegetation", false, {107, 142, 35}}, {3, "sky", false, {70, 130, 180}},
      {4, "person", true, {220, 20, 60}}, {5, "car", true, {0, 0, 142}},
      {6, "bicycle", true, {119, 11, 32}}};
  return ClassConfig(std::move(list), 255);
}

void CompactInstanceIds(PanopticMap& map) {
  std::map<std::int32_t, std::int32_t> remap;
  for (std::int32_t& id : map.instance_map) {
    if (id == 0) continue;
    auto [it, inserted] = remap.try_emplace(id, static_cast<std::int32_t>(remap.size()) + 1);
    id = it->second;
  }
}

Fixture GenerateFixture(std::uint64_t seed, const FixtureSpec& spec,
                        const ClassConfig& classes) {
  const std::vector<std::int32_t> stuff = IdsWhere(classes, false);
  const std::vector<std::int32_t> things = IdsWhere(classes, true);
  if (stuff.empty() || things.empty()) {
    throw InputError("fixture: the class table needs stuff and thing classes");
  }
  if (spec.height < 4 || spec.width < 4 || spec.n_instances < 0 ||
      spec.n_false_positives < 0 || spec.void_rows < 0 ||
      spec.label_noise < 0.0 || spec.label_noise > 1.0) {
    throw InputError("fixture: invalid spec (image at least 4x4, counts non-negative, "
                     "label noise in [0, 1])");
  }
  const int usable_h = spec.height - spec.void_rows;
  if (usable_h < 2) {
    throw InputError("fixture: " + std::to_string(spec.void_rows) +
                     " void rows leave no room in a height of " +
                     std::to_string(spec.height));
  }
  const std::int64_t pixels = static_cast<std::int64_t>(usable_h) * spec.width;
  if (static_cast<std::int64_t>(spec.n_instances) * 4 > pixels) {
    throw InputError("fixture: " + std::to_string(spec.n_instances) +
                     " instances of at least 2x2 pixels do not fit in " +
                     std::to_string(pixels) + " labelled pixels");
  }

  Rng rng(seed);
  Fixture fx;
  PanopticMap& gt = fx.ground_truth;
  gt = PanopticMap::Void(spec.height, spec.width, classes.void_id());
  const int bands = rng.UniformInt(1, std::min<int>(3, static_cast<int>(stuff.size())));
  for (int b = 0; b < bands; ++b) {
    const int y0 = usable_h * b / bands;
    const int y1 = usable_h * (b + 1) / bands;
    Paint(gt, {0, y0, spec.width, y1 - y0}, Pick(rng, stuff), 0);
  }

  std::vector<Rect> rects;
  std::vector<std::int32_t> rect_class;
  for (int k = 0; k < spec.n_instances; ++k) {
    const Rect r = RandomRect(rng, spec.width / 4, usable_h / 3, 2, spec.width, usable_h);
    const std::int32_t cls = Pick(rng, things);
    Paint(gt, r, cls, k + 1);
    rects.push_back(r);
    rect_class.push_back(cls);
  }
  // Occluded objects vanish; the rest are renumbered 1..K.
  std::vector<std::int32_t> visible_id(spec.n_instances + 1, 0);
  std::int32_t next = 1;
  for (std::int32_t& id : gt.instance_map) {
    if (id == 0) continue;
    if (visible_id[id] == 0) visible_id[id] = next++;
    id = visible_id[id];
  }

  const int n_classes = classes.size();
  fx.semantic_logits = Tensor(Dims{1, n_classes, spec.height, spec.width});
  const std::size_t plane = fx.semantic_logits.dims().plane();
  auto sem = fx.semantic_logits.mutable_data();
  for (std::size_t p = 0; p < plane; ++p) {
    for (int c = 0; c < n_classes; ++c) {
      sem[c * plane + p] = static_cast<float>(rng.Uniform(0.5, 2.0));
    }
    if (gt.class_map[p] == classes.void_id()) continue;
    int winner = *classes.channel_of(gt.class_map[p]);
    if (rng.Bernoulli(spec.label_noise)) winner = rng.UniformInt(0, n_classes - 1);
    sem[winner * plane + p] = static_cast<float>(rng.Uniform(4.0, 6.0));
  }

  auto mask_for = [&](const Rect& r, auto&& inside) {
    Tensor mask(Dims{1, 1, kMaskSize, kMaskSize});
    for (int i = 0; i < kMaskSize; ++i) {
      for (int j = 0; j < kMaskSize; ++j) {
        const int y = r.y0 + (2 * i + 1) * r.h / (2 * kMaskSize);
        const int x = r.x0 + (2 * j + 1) * r.w / (2 * kMaskSize);
        const double base = inside(y, x) ? 4.0 : -4.0;
        mask.at(0, 0, i, j) = static_cast<float>(base + rng.Uniform(-1.0, 1.0));
      }
    }
    return mask;
  };
  auto jittered_box = [&](const Rect& r) {
    // Jitter below half a pixel keeps the rounded box equal to the rectangle.
    return Box{r.x0 + rng.Uniform(-0.4, 0.4), r.y0 + rng.Uniform(-0.4, 0.4),
               r.x0 + r.w + rng.Uniform(-0.4, 0.4), r.y0 + r.h + rng.Uniform(-0.4, 0.4)};
  };
  for (int k = 0; k < spec.n_instances; ++k) {
    const std::int32_t id = visible_id[k + 1];
    if (id == 0) continue;
    const Rect& r = rects[k];
    InstancePrediction inst;
    inst.class_id = rect_class[k];
    inst.score = rng.Uniform(0.6, 1.0);
    inst.bbox = jittered_box(r);
    inst.mask_logits = mask_for(r, [&](int y, int x) {
      return gt.instance_map[gt.index(y, x)] == id;
    });
    fx.instances.push_back(std::move(inst));
  }
  for (int k = 0; k < spec.n_false_positives; ++k) {
    const Rect r = RandomRect(rng, spec.width / 4, usable_h / 3, 2, spec.width, usable_h);
    InstancePrediction inst;
    inst.class_id = Pick(rng, things);
    inst.score = rng.Uniform(0.05, 0.7);
    inst.bbox = jittered_box(r);
    inst.mask_logits = mask_for(r, [&](int y, int x) {
      return 4 * (y - r.y0) >= r.h && 4 * (y - r.y0) < 3 * r.h &&
             4 * (x - r.x0) >= r.w && 4 * (x - r.x0) < 3 * r.w;
    });
    fx.instances.push_back(std::move(inst));
  }
  ValidatePanopticMap(gt, classes);
  return fx;
}

PanopticMap RandomPanopticMap(Rng& rng, int height, int width,
                              const ClassConfig& classes, int max_instances) {
  const std::vector<std::int32_t> stuff = IdsWhere(classes, false);
  const std::vector<std::int32_t> things = IdsWhere(classes, true);
  if (stuff.empty() || things.empty() || height < 2 || width < 2) {
    throw InputError("random map: needs stuff and thing classes and at least 2x2 pixels");
  }
  PanopticMap map = PanopticMap::Void(height, width, classes.void_id());
  Paint(map, {0, 0, width, height}, Pick(rng, stuff), 0);
  const int patches = rng.UniformInt(0, 3);
  for (int i = 0; i < patches; ++i) {
    Paint(map, RandomRect(rng, width, height, 1, width, height), Pick(rng, stuff), 0);
  }
  if (rng.Bernoulli(0.5)) {
    Paint(map, RandomRect(rng, width / 4, height / 4, 1, width, height), classes.void_id(), 0);
  }
  const int n = rng.UniformInt(0, max_instances);
  for (int k = 0; k < n; ++k) {
    const Rect r = RandomRect(rng, width / 2, height / 2, 2, width, height);
    const bool crowd = rng.Bernoulli(0.1);
    Paint(map, r, Pick(rng, things), crowd ? 0 : k + 1);
  }
  CompactInstanceIds(map);
  return map;
}

PanopticMap PerturbPanopticMap(const PanopticMap& gt, Rng& rng,
                               const ClassConfig& classes, int max_instances) {
  const std::vector<std::int32_t> stuff = IdsWhere(classes, false);
  const std::vector<std::int32_t> things = IdsWhere(classes, true);
  PanopticMap pred = gt;
  std::int32_t next = 1 + *std::max_element(pred.instance_map.begin(), pred.instance_map.end());
  // Predictions have no crowd regions: each becomes an ordinary instance.
  std::map<std::int32_t, std::int32_t> crowd_ids;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred.instance_map[i] == 0 && classes.is_thing(pred.class_map[i])) {
      auto [it, inserted] = crowd_ids.try_emplace(pred.class_map[i], next);
      if (inserted) ++next;
      pred.instance_map[i] = it->second;
    }
  }
  int added = 0;
  const int edits = rng.UniformInt(0, 4);
  for (int e = 0; e < edits; ++e) {
    const Rect r = RandomRect(rng, pred.width / 2, pred.height / 2, 1, pred.width,
                              pred.height);
    const int kind = rng.UniformInt(0, 2);
    if (kind == 0) {
      Paint(pred, r, Pick(rng, stuff), 0);
    } else if (kind == 1 && added < max_instances) {
      Paint(pred, r, Pick(rng, things), next++);
      ++added;
    } else {
      Paint(pred, r, classes.void_id(), 0);
    }
  }
  CompactInstanceIds(pred);
  return pred;
}

std::vector<fs::path> WriteFixtureSet(const fs::path& dir, std::uint64_t seed, int count,
                                      const FixtureSpec& spec, const ClassConfig& classes) {
  if (count < 1) throw InputError("fixture: image count must be positive");
  fs::create_directories(dir / "semantic");
  fs::create_directories(dir / "gt");
  std::vector<fs::path> written;
  std::vector<ImageRecord> records;
  Rng seeds(seed);
  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "img%03d", i);
    Fixture fx = GenerateFixture(seeds.Next(), spec, classes);
    const fs::path semantic = dir / "semantic" / (std::string(name) + ".ptsr");
    WritePtsr(semantic, fx.semantic_logits);
    const fs::path png = dir / "gt" / (std::string(name) + ".png");
    WritePanopticPng(png, fx.ground_truth, classes);
    written.push_back(semantic);
    written.push_back(png);
    written.push_back(SidecarPath(png));
    for (std::size_t k = 0; k < fx.instances.size(); ++k) {
      written.push_back(dir / "masks" / (std::string(name) + "_" + std::to_string(k) + ".ptsr"));
    }
    records.push_back({name, semantic, std::move(fx.instances)});
  }
  WriteInstanceManifest(dir, "instances.json", records);
  written.push_back(dir / "instances.json");
  return written;
}

}  // namespace panoptic
