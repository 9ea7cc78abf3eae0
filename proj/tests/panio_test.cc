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
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "panoptic/errors.h"
#include "panoptic/fixture.h"
#include "panoptic/panoptic_png.h"
#include "panoptic/ptsr.h"

namespace panoptic {
namespace {

namespace fs = std::filesystem;
using testing::MakeMap;
using testing::RandomTensor;

const ClassConfig& Classes() {
  static const ClassConfig c = ToyClasses();
  return c;
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("panio_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

template <typename Fn>
std::string ErrorText(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(SegmentIdTest, RgbPacking) {
  const std::array<std::uint8_t, 3> expected{44, 1, 0};
  EXPECT_EQ(SegmentIdToRgb(300), expected);
  EXPECT_EQ(RgbToSegmentId(44, 1, 0), 300u);
  EXPECT_EQ(RgbToSegmentId(0, 0, 0), 0u);
  EXPECT_EQ(RgbToSegmentId(255, 255, 255), kMaxSegmentId);
  Rng rng(51);
  for (int i = 0; i < 1000; ++i) {
    const auto id = static_cast<std::uint32_t>(rng.UniformInt(0, kMaxSegmentId));
    const auto rgb = SegmentIdToRgb(id);
    EXPECT_EQ(RgbToSegmentId(rgb[0], rgb[1], rgb[2]), id);
  }
}

TEST(SegmentIdTest, Convention) {
  EXPECT_EQ(SegmentIdFor(0, false, 0), 1u);  // stuff class 0 stays distinct from void
  EXPECT_EQ(SegmentIdFor(11, false, 0), 12u);
  EXPECT_EQ(SegmentIdFor(4, true, 3), 3004u);
  EXPECT_EQ(SegmentIdFor(4, true, 0), 5u);  // crowd region
}

TEST(PanopticPngTest, VoidPixelsAreBlack) {
  const PanopticMap map = MakeMap(1, 3, {255, 0, 4}, {0, 0, 1});
  const EncodedPanoptic enc = EncodePanoptic(map, Classes());
  int h = 0, w = 0;
  const std::vector<std::uint8_t> rgb = DecodeRgbPng(enc.png, &h, &w, "mem");
  ASSERT_EQ(rgb.size(), 9u);
  EXPECT_EQ(rgb[0], 0);
  EXPECT_EQ(rgb[1], 0);
  EXPECT_EQ(rgb[2], 0);
  EXPECT_EQ(RgbToSegmentId(rgb[3], rgb[4], rgb[5]), 1u);
  EXPECT_EQ(RgbToSegmentId(rgb[6], rgb[7], rgb[8]), 1004u);
}

TEST(PanopticPngTest, RoundTripOnRandomMaps) {
  Rng rng(52);
  for (int i = 0; i < 100; ++i) {
    const int h = static_cast<int>(rng.UniformInt(2, 24));
    const int w = static_cast<int>(rng.UniformInt(2, 24));
    const PanopticMap map = RandomPanopticMap(rng, h, w, Classes(), 6);
    EXPECT_EQ(DecodePanoptic(EncodePanoptic(map, Classes()), Classes(), "mem"), map);
  }
}

TEST(PanopticPngTest, FileRoundTrip) {
  const fs::path dir = TempDir("file");
  Rng rng(53);
  const PanopticMap map = RandomPanopticMap(rng, 17, 9, Classes(), 4);
  WritePanopticPng(dir / "a.png", map, Classes());
  EXPECT_TRUE(fs::exists(dir / "a.json"));
  EXPECT_EQ(SidecarPath(dir / "a.png"), dir / "a.json");
  EXPECT_EQ(ReadPanopticPng(dir / "a.png", Classes()), map);
}

TEST(PanopticPngTest, UnknownPixelIdIsNamed) {
  const PanopticMap map = MakeMap(1, 2, {0, 4}, {0, 1});
  EncodedPanoptic enc = EncodePanoptic(map, Classes());
  // Drop the thing segment from the manifest.
  const std::size_t at = enc.manifest.find("1004");
  ASSERT_NE(at, std::string::npos);
  const std::string stripped = R"({"format": "panoptic-segments", "version": 1, "height": 1,
    "width": 2, "segments": [{"id": 1, "class_id": 0, "is_thing": false, "instance": 0}]})";
  enc.manifest = stripped;
  const std::string err = ErrorText([&] { DecodePanoptic(enc, Classes(), "mem"); });
  EXPECT_NE(err.find("1004"), std::string::npos) << err;
}

TEST(PanopticPngTest, ManifestClassMismatchIsNamed) {
  EncodedPanoptic enc = EncodePanoptic(MakeMap(1, 1, {0}, {0}), Classes());
  enc.manifest = R"({"format": "panoptic-segments", "version": 1, "height": 1, "width": 1,
    "segments": [{"id": 1, "class_id": 0, "is_thing": true, "instance": 0}]})";
  const std::string err = ErrorText([&] { DecodePanoptic(enc, Classes(), "mem"); });
  EXPECT_NE(err.find("1"), std::string::npos);
  EXPECT_THROW(DecodePanoptic(enc, Classes(), "mem"), FormatError);
  enc.manifest = R"({"format": "panoptic-segments", "version": 1, "height": 1, "width": 1,
    "segments": [{"id": 1, "class_id": 77, "is_thing": false, "instance": 0}]})";
  EXPECT_NE(ErrorText([&] { DecodePanoptic(enc, Classes(), "mem"); }).find("77"),
            std::string::npos);
}

TEST(PanopticPngTest, RejectsCorruptInput) {
  EncodedPanoptic enc = EncodePanoptic(MakeMap(1, 1, {0}, {0}), Classes());
  enc.png.resize(enc.png.size() / 2);
  EXPECT_THROW(DecodePanoptic(enc, Classes(), "mem"), FormatError);
  EXPECT_THROW(ReadPanopticPng("/nonexistent/x.png", Classes()), FormatError);
  const PanopticMap bad = MakeMap(1, 1, {0}, {3});
  EXPECT_THROW(EncodePanoptic(bad, Classes()), InvariantError);
}

TEST(PanopticPngTest, SegmentIdOverflowIsRejected) {
  // Instance 16778 of class 4 needs id 16,778,004 > 2^24 - 1.
  const int n = 16778;
  PanopticMap map = PanopticMap::Void(1, n, 255);
  for (int i = 0; i < n; ++i) {
    map.class_map[i] = 4;
    map.instance_map[i] = i + 1;
  }
  EXPECT_THROW(EncodePanoptic(map, Classes()), InputError);
}

TEST(ClassConfigTest, JsonRoundTripAndCityscapes) {
  const ClassConfig c = ClassConfig::Cityscapes();
  EXPECT_EQ(c.size(), 19);
  EXPECT_EQ(c.n_stuff(), 11);
  EXPECT_EQ(c.n_thing(), 8);
  EXPECT_EQ(c.void_id(), 255);
  const ClassConfig r = ClassConfig::FromJson(c.ToJson(), "mem");
  ASSERT_EQ(r.size(), c.size());
  for (int i = 0; i < c.size(); ++i) {
    EXPECT_EQ(r.classes()[i].id, c.classes()[i].id);
    EXPECT_EQ(r.classes()[i].name, c.classes()[i].name);
    EXPECT_EQ(r.classes()[i].is_thing, c.classes()[i].is_thing);
    EXPECT_EQ(r.classes()[i].color, c.classes()[i].color);
  }
  EXPECT_EQ(c.stuff_channels().size(), 11u);
  EXPECT_EQ(c.channel_of(c.classes()[5].id), 5);
  EXPECT_FALSE(c.channel_of(255).has_value());
}

TEST(ClassConfigTest, ParseErrorsAreSpecific) {
  const std::string dup = R"({"format": "panoptic-classes", "version": 1, "void_id": 255,
    "classes": [{"id": 3, "name": "a", "thing": false, "color": [0, 0, 0]},
                {"id": 3, "name": "b", "thing": true, "color": [0, 0, 0]}]})";
  std::string err = ErrorText([&] { ClassConfig::FromJson(dup, "dup.json"); });
  EXPECT_NE(err.find("duplicate class id 3"), std::string::npos) << err;
  EXPECT_NE(err.find("dup.json"), std::string::npos) << err;

  const std::string miscount = R"({"format": "panoptic-classes", "version": 1, "void_id": 255,
    "n_stuff": 2, "n_thing": 0,
    "classes": [{"id": 3, "name": "a", "thing": false, "color": [0, 0, 0]}]})";
  err = ErrorText([&] { ClassConfig::FromJson(miscount, "m.json"); });
  EXPECT_NE(err.find("n_stuff"), std::string::npos) << err;

  const std::string void_clash = R"({"format": "panoptic-classes", "version": 1, "void_id": 3,
    "classes": [{"id": 3, "name": "a", "thing": false, "color": [0, 0, 0]}]})";
  EXPECT_THROW(ClassConfig::FromJson(void_clash, "v.json"), FormatError);
  EXPECT_THROW(ClassConfig::FromJson("{", "broken.json"), FormatError);
  EXPECT_THROW(ClassConfig::FromJson(R"({"format": "x", "version": 1})", "x.json"), FormatError);
  EXPECT_THROW(ClassConfig({}, 255), InputError);
  EXPECT_THROW(ClassConfig({{999, "big", false, {}}}, 255), InputError);
}

TEST(ClassConfigTest, BundledConfigMatchesBuiltIn) {
  const ClassConfig file =
      ClassConfig::Load(fs::path(PANOPTIC_CONFIG_DIR) / "cityscapes.classes.json");
  const ClassConfig built = ClassConfig::Cityscapes();
  ASSERT_EQ(file.size(), built.size());
  for (int i = 0; i < file.size(); ++i) {
    EXPECT_EQ(file.classes()[i].id, built.classes()[i].id);
    EXPECT_EQ(file.classes()[i].is_thing, built.classes()[i].is_thing);
  }
}

TEST(PtsrTest, RoundTrip) {
  Rng rng(54);
  for (int i = 0; i < 50; ++i) {
    const Dims d{static_cast<int>(rng.UniformInt(1, 3)), static_cast<int>(rng.UniformInt(1, 5)),
                 static_cast<int>(rng.UniformInt(1, 9)), static_cast<int>(rng.UniformInt(1, 9))};
    const Tensor t = RandomTensor(d, rng, -1e6, 1e6);
    const std::vector<std::uint8_t> bytes = EncodePtsr(t);
    EXPECT_EQ(bytes.size(), kPtsrHeaderSize + 4 * t.size());
    const Tensor r = DecodePtsr(bytes);
    EXPECT_EQ(r.dims(), t.dims());
    EXPECT_EQ(std::vector<float>(r.data().begin(), r.data().end()),
              std::vector<float>(t.data().begin(), t.data().end()));
  }
}

TEST(PtsrTest, LayoutIsLittleEndian) {
  const Tensor t(Dims{1, 1, 1, 2}, {1.0f, -2.0f});
  const std::vector<std::uint8_t> b = EncodePtsr(t);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "PTSR");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[5], 1);    // n
  EXPECT_EQ(b[17], 2);   // w
  EXPECT_EQ(b[21], 0x00);  // 1.0f = 0x3f800000
  EXPECT_EQ(b[24], 0x3f);
  EXPECT_EQ(b[28], 0xc0);  // -2.0f = 0xc0000000
}

TEST(PtsrTest, Errors) {
  const Tensor t(Dims{1, 1, 2, 2}, {1, 2, 3, 4});
  std::vector<std::uint8_t> b = EncodePtsr(t);
  std::vector<std::uint8_t> bad = b;
  bad[0] = 'X';
  EXPECT_THROW(DecodePtsr(bad, "x"), FormatError);
  bad = b;
  bad[4] = 9;
  EXPECT_THROW(DecodePtsr(bad, "x"), FormatError);
  bad = b;
  bad.pop_back();
  const std::string err = ErrorText([&] { DecodePtsr(bad, "short.ptsr"); });
  EXPECT_NE(err.find("short.ptsr"), std::string::npos);
  bad = b;
  bad.push_back(0);
  EXPECT_THROW(DecodePtsr(bad, "x"), FormatError);
  EXPECT_THROW(ReadPtsr("/nonexistent/t.ptsr"), FormatError);
}

}  // namespace
}  // namespace panoptic
