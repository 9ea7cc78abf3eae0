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


#ifndef PANOPTIC_FIXTURE_H_
#define PANOPTIC_FIXTURE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "panoptic/class_config.h"
#include "panoptic/instprep.h"
#include "panoptic/panoptic_map.h"
#include "panoptic/rng.h"
#include "panoptic/tensor.h"

namespace panoptic {

struct FixtureSpec {
  int height = 64;
  int width = 128;
  int n_instances = 4;        // ground-truth objects
  int n_false_positives = 1;  // extra low-confidence detections
  int void_rows = 1;          // void band along the bottom edge
  double label_noise = 0.05;  // fraction of pixels with a wrong semantic winner
};

// One synthetic image: ground truth plus network-like outputs consistent
// with it. Semantic scores are positive (the true class scores in [4, 6),
// the rest in [0.5, 2)); mask logits are about +4 on the object and -4
// elsewhere.
struct Fixture {
  PanopticMap ground_truth;
  Tensor semantic_logits;  // 1 x C x H x W
  std::vector<InstancePrediction> instances;
};

// Deterministic per seed. Throws InputError when the spec cannot be
// satisfied (too many instances for the image, no stuff or thing classes).
Fixture GenerateFixture(std::uint64_t seed, const FixtureSpec& spec,
                        const ClassConfig& classes);

// Four stuff classes (ids 0-3) and three thing classes (ids 4-6), void 255.
ClassConfig ToyClasses();

// Random valid map: stuff rectangles, a few void pixels, up to
// `max_instances` thing rectangles, occasionally a crowd region.
PanopticMap RandomPanopticMap(Rng& rng, int height, int width,
                              const ClassConfig& classes, int max_instances);

// A prediction derived from `gt` by painting random rectangles over it, so
// that matches, misses and spurious segments all occur.
PanopticMap PerturbPanopticMap(const PanopticMap& gt, Rng& rng,
                               const ClassConfig& classes, int max_instances);

// Renumbers instance ids to 1..K in order of first appearance.
void CompactInstanceIds(PanopticMap& map);

// Writes a fixture set for the CLI:
//   dir/instances.json, dir/semantic/<name>.ptsr, dir/masks/*.ptsr,
//   dir/gt/<name>.png (+ .json sidecar)
// Images are named img000, img001, ... Returns the written paths.
std::vector<std::filesystem::path> WriteFixtureSet(const std::filesystem::path& dir,
                                                   std::uint64_t seed, int count,
                                                   const FixtureSpec& spec,
                                                   const ClassConfig& classes);

}  // namespace panoptic

#endif  // PANOPTIC_FIXTURE_H_
