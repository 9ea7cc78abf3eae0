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

#include <algorithm>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "panoptic/blocks.h"
#include "panoptic/errors.h"
#include "panoptic/param_count.h"
#include "panoptic/rng.h"

namespace panoptic {
namespace {

LayerDesc Layer(LayerKind kind, int k, int in, int out, bool bias = false) {
  LayerDesc d;
  d.name = "l";
  d.kind = kind;
  d.kernel = {k, k};
  d.in_channels = in;
  d.out_channels = out;
  d.bias = bias;
  return d;
}

TEST(ConvParamsTest, Arithmetic) {
  EXPECT_EQ(ConvParams(Layer(LayerKind::kStandard, 3, 256, 256)), 589824);
  EXPECT_EQ(ConvParams(Layer(LayerKind::kSeparable, 3, 256, 256)), 67840);
  EXPECT_EQ(ConvParams(Layer(LayerKind::kStandard, 1, 512, 19, true)), 512 * 19 + 19);
  LayerDesc grouped = Layer(LayerKind::kStandard, 3, 64, 64);
  grouped.groups = 64;
  EXPECT_EQ(ConvParams(grouped), 576);
}

TEST(CountParamsTest, BundledMaskHeadSaving) {
  const std::vector<LayerDesc> layers =
      LoadNetworkDescription(std::string(PANOPTIC_CONFIG_DIR) + "/mask_head.layers");
  const std::int64_t separable = CountParams(layers).total;
  const std::int64_t standard = CountParams(AsStandard(layers)).total;
  EXPECT_EQ(standard - separable, 2087936);
  EXPECT_EQ(standard - separable, 4 * (589824 - 67840));
}

TEST(CountParamsTest, AdditiveAndOrderInvariant) {
  Rng rng(51);
  std::vector<LayerDesc> layers;
  for (int i = 0; i < 12; ++i) {
    LayerDesc d = Layer(rng.Bernoulli(0.5) ? LayerKind::kSeparable : LayerKind::kStandard,
                        rng.UniformInt(1, 3) * 2 - 1, rng.UniformInt(1, 64),
                        rng.UniformInt(1, 64), rng.Bernoulli(0.5));
    d.norm = rng.Bernoulli(0.5);
    layers.push_back(d);
  }
  const ParamCountReport all = CountParams(layers);
  std::int64_t sum = 0;
  for (const LayerCount& l : all.layers) sum += l.conv_params;
  EXPECT_EQ(all.total, sum);
  EXPECT_EQ(all.total, all.standard_total + all.separable_total);
  const std::vector<LayerDesc> head(layers.begin(), layers.begin() + 5);
  const std::vector<LayerDesc> tail(layers.begin() + 5, layers.end());
  EXPECT_EQ(CountParams(head).total + CountParams(tail).total, all.total);
  std::reverse(layers.begin(), layers.end());
  EXPECT_EQ(CountParams(layers).total, all.total);
  EXPECT_EQ(CountParams(layers).norm_total, all.norm_total);
}

TEST(ParseNetworkDescriptionTest, ParsesLayers) {
  const auto layers = ParseNetworkDescription(
      "version 1\n"
      "# comment\n"
      "layer a kind=separable kernel=3x3 in=8 out=16 norm=1\n"
      "\n"
      "layer b kind=standard kernel=1x1 in=16 out=4 bias=1   # trailing\n",
      "inline");
  ASSERT_EQ(layers.size(), 2u);
  EXPECT_EQ(layers[0].name, "a");
  EXPECT_EQ(layers[0].kind, LayerKind::kSeparable);
  EXPECT_TRUE(layers[0].norm);
  EXPECT_EQ(layers[1].line, 5);
  EXPECT_TRUE(layers[1].bias);
  const ParamCountReport r = CountParams(layers);
  EXPECT_EQ(r.total, 9 * 8 + 8 * 16 + 16 * 4 + 4);
  EXPECT_EQ(r.norm_total, 32);
}

TEST(ParseNetworkDescriptionTest, EmptyListCountsZero) {
  EXPECT_EQ(CountParams(ParseNetworkDescription("version 1\n", "inline")).total, 0);
}

TEST(ParseNetworkDescriptionTest, ErrorsNameLineAndKind) {
  try {
    ParseNetworkDescription("version 1\nlayer x kind=dilated kernel=3x3 in=1 out=1\n", "f");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("dilated"), std::string::npos) << msg;
  }
  EXPECT_THROW(ParseNetworkDescription("version 2\n", "f"), FormatError);
  EXPECT_THROW(ParseNetworkDescription("version 1\nlayer x kind=standard kernel=3 in=1 out=1\n",
                                       "f"),
               FormatError);
  EXPECT_THROW(ParseNetworkDescription("version 1\nlayer x kind=standard kernel=3x3 in=3 "
                                       "out=4 groups=2\n",
                                       "f"),
               FormatError);
}

TEST(DescribeBlockTest, DpcCountsMatchManualSum) {
  const BlockWeights w = RandomBlockWeights(BlockKind::kDpc, 256, 52);
  const ParamCountReport r = CountParams(DescribeBlock(w, "dpc."));
  EXPECT_EQ(r.layers.size(), 6u);
  EXPECT_EQ(r.total, 5 * 67840 + 1280 * 256);
}

}  // namespace
}  // namespace panoptic
