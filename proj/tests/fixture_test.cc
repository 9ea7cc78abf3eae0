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

#include <filesystem>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "panoptic/errors.h"
#include "panoptic/fixture.h"
#include "panoptic/instprep.h"
#include "panoptic/panoptic_png.h"
#include "panoptic/ptsr.h"

namespace panoptic {
namespace {

namespace fs = std::filesystem;

const ClassConfig& Classes() {
  static const ClassConfig c = ToyClasses();
  return c;
}

std::vector<float> Values(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

void ExpectSame(const Fixture& a, const Fixture& b) {
  EXPECT_EQ(a.ground_truth, b.ground_truth);
  EXPECT_EQ(a.semantic_logits.dims(), b.semantic_logits.dims());
  EXPECT_EQ(Values(a.semantic_logits), Values(b.semantic_logits));
  ASSERT_EQ(a.instances.size(), b.instances.size());
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    const InstancePrediction& x = a.instances[i];
    const InstancePrediction& y = b.instances[i];
    EXPECT_EQ(x.class_id, y.class_id);
    EXPECT_EQ(x.score, y.score);
    EXPECT_EQ(x.bbox.x1, y.bbox.x1);
    EXPECT_EQ(x.bbox.y2, y.bbox.y2);
    EXPECT_EQ(Values(x.mask_logits), Values(y.mask_logits));
  }
}

TEST(FixtureTest, SameSeedIsBitIdentical) {
  const FixtureSpec spec;
  ExpectSame(GenerateFixture(7, spec, Classes()), GenerateFixture(7, spec, Classes()));
  const Fixture other = GenerateFixture(8, spec, Classes());
  EXPECT_NE(Values(other.semantic_logits), Values(GenerateFixture(7, spec, Classes()).semantic_logits));
}

TEST(FixtureTest, GeneratedMapsAreValid) {
  FixtureSpec spec;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    spec.n_instances = static_cast<int>(seed % 6);
    const Fixture fx = GenerateFixture(seed, spec, Classes());
    EXPECT_EQ(PanopticMapViolation(fx.ground_truth, Classes()), "") << seed;
    EXPECT_EQ(fx.semantic_logits.dims(), (Dims{1, Classes().size(), spec.height, spec.width}));
    EXPECT_EQ(fx.instances.size(),
              static_cast<std::size_t>(spec.n_instances + spec.n_false_positives));
    for (const InstancePrediction& p : fx.instances) {
      EXPECT_TRUE(Classes().is_thing(p.class_id));
      EXPECT_GT(p.score, 0.0);
      EXPECT_LE(p.score, 1.0);
      EXPECT_LT(p.bbox.x1, p.bbox.x2);
      EXPECT_LT(p.bbox.y1, p.bbox.y2);
    }
  }
}

TEST(FixtureTest, ZeroInstancesGiveStuffOnlyGroundTruth) {
  FixtureSpec spec;
  spec.n_instances = 0;
  spec.n_false_positives = 0;
  const Fixture fx = GenerateFixture(3, spec, Classes());
  EXPECT_TRUE(fx.instances.empty());
  for (std::size_t p = 0; p < fx.ground_truth.size(); ++p) {
    const std::int32_t c = fx.ground_truth.class_map[p];
    EXPECT_TRUE(c == 255 || Classes().is_stuff(c)) << c;
    EXPECT_EQ(fx.ground_truth.instance_map[p], 0);
  }
}

TEST(FixtureTest, InfeasibleSpecsAreRejected) {
  FixtureSpec spec;
  spec.height = 2;
  spec.width = 2;
  spec.n_instances = 10;
  EXPECT_THROW(GenerateFixture(1, spec, Classes()), InputError);
  const ClassConfig stuff_only({{0, "road", false, {}}}, 255);
  EXPECT_THROW(GenerateFixture(1, FixtureSpec{}, stuff_only), InputError);
}

TEST(FixtureTest, RandomMapsAreValid) {
  Rng rng(61);
  for (int i = 0; i < 200; ++i) {
    const PanopticMap gt = RandomPanopticMap(rng, 16, 16, Classes(), 5);
    EXPECT_EQ(PanopticMapViolation(gt, Classes()), "");
    const PanopticMap pred = PerturbPanopticMap(gt, rng, Classes(), 5);
    EXPECT_EQ(PanopticMapViolation(pred, Classes()), "");
    for (std::size_t p = 0; p < pred.size(); ++p) {
      // Predictions never contain crowd regions.
      if (Classes().is_thing(pred.class_map[p])) {
        EXPECT_GT(pred.instance_map[p], 0);
      }
    }
  }
}

TEST(FixtureTest, CompactInstanceIdsUsesFirstAppearance) {
  PanopticMap m = PanopticMap::Void(1, 4, 255);
  m.class_map = {4, 4, 5, 4};
  m.instance_map = {7, 7, 3, 9};
  CompactInstanceIds(m);
  EXPECT_EQ(m.instance_map, (std::vector<std::int32_t>{1, 1, 2, 3}));
}

TEST(FixtureTest, WrittenSetReadsBack) {
  const fs::path dir = fs::temp_directory_path() / "fixture_test_set";
  fs::remove_all(dir);
  FixtureSpec spec;
  spec.height = 16;
  spec.width = 24;
  spec.n_instances = 2;
  const auto written = WriteFixtureSet(dir, 5, 2, spec, Classes());
  for (const fs::path& f : written) EXPECT_TRUE(fs::exists(f)) << f;
  const std::vector<ImageRecord> records = LoadInstanceManifest(dir / "instances.json", Classes());
  ASSERT_EQ(records.size(), 2u);
  Rng seeds(5);
  for (const ImageRecord& rec : records) {
    const Fixture fx = GenerateFixture(seeds.Next(), spec, Classes());
    EXPECT_EQ(Values(ReadPtsr(rec.semantic)), Values(fx.semantic_logits));
    EXPECT_EQ(ReadPanopticPng(dir / "gt" / (rec.name + ".png"), Classes()), fx.ground_truth);
    ASSERT_EQ(rec.instances.size(), fx.instances.size());
    for (std::size_t k = 0; k < fx.instances.size(); ++k) {
      EXPECT_EQ(rec.instances[k].class_id, fx.instances[k].class_id);
      EXPECT_EQ(Values(rec.instances[k].mask_logits), Values(fx.instances[k].mask_logits));
    }
  }
}

}  // namespace
}  // namespace panoptic
