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
#include <vector>

#include "gtest/gtest.h"
#include "panoptic/errors.h"
#include "panoptic/semantic.h"
#include "panoptic/weights_io.h"

namespace panoptic {
namespace {

constexpr std::array<int, kNumLevels> kSmallEncoder{8, 12, 16, 24};

Tensor Batch(const Tensor& t, int n) {
  return Tensor(Dims{1, t.c(), t.h(), t.w()},
                std::vector<float>(t.data().begin() + static_cast<std::ptrdiff_t>(n) * t.c() *
                                                          t.dims().plane(),
                                   t.data().begin() + static_cast<std::ptrdiff_t>(n + 1) *
                                                          t.c() * t.dims().plane()));
}

TEST(SemanticPipelineTest, ContractsAt64x128) {
  const EncoderFeatures feats = StubEncoder(64, 128, kDefaultEncoderChannels, 61);
  const NetworkWeights w = RandomNetworkWeights(kDefaultEncoderChannels, 19, 62);
  ValidateNetworkWeights(w);
  const PyramidFeatures p = TwoWayFpnForward(feats, w.fpn);
  for (int l = 0; l < kNumLevels; ++l) {
    const int f = 4 << l;
    EXPECT_EQ(p.levels[l].dims(), (Dims{1, 256, 64 / f, 128 / f}));
  }
  SemanticHeadTrace trace;
  const SemanticOutput out = SemanticHeadForward(p, w.head, 19, &trace);
  EXPECT_EQ(trace.concat.dims(), (Dims{1, 512, 16, 32}));
  EXPECT_EQ(trace.dpc32.concat.c(), 1280);
  EXPECT_EQ(trace.dpc16.concat.c(), 1280);
  EXPECT_EQ(out.logits.dims(), (Dims{1, 19, 64, 128}));
  for (std::size_t i = 0; i < out.probabilities.dims().plane(); ++i) {
    double sum = 0.0;
    for (int c = 0; c < 19; ++c) sum += out.probabilities.plane(0, c)[i];
    ASSERT_NEAR(sum, 1.0, 1e-6);
  }
}

TEST(SemanticPipelineTest, ForwardEqualsHandComposedChain) {
  const EncoderFeatures feats = StubEncoder(64, 64, kSmallEncoder, 63);
  const NetworkWeights w = RandomNetworkWeights(kSmallEncoder, 5, 64);
  const PyramidFeatures p = TwoWayFpnForward(feats, w.fpn);
  const SemanticOutput out = SemanticHeadForward(p, w.head, 5);

  // Pyramid.
  std::array<Tensor, kNumLevels> td, bu, level;
  td[3] = FpnLateralForward(feats.levels[3], w.fpn.top_down_lateral[3]);
  for (int l = 2; l >= 0; --l) {
    const Tensor lat = FpnLateralForward(feats.levels[l], w.fpn.top_down_lateral[l]);
    td[l] = Add(lat, BilinearResize(td[l + 1], lat.h(), lat.w()));
  }
  bu[0] = FpnLateralForward(feats.levels[0], w.fpn.bottom_up_lateral[0]);
  for (int l = 1; l < kNumLevels; ++l) {
    const Tensor lat = FpnLateralForward(feats.levels[l], w.fpn.bottom_up_lateral[l]);
    bu[l] = Add(lat, BilinearResize(bu[l - 1], lat.h(), lat.w()));
  }
  for (int l = 0; l < kNumLevels; ++l) {
    level[l] = FpnOutputForward(Add(td[l], bu[l]), w.fpn.output[l]);
    ASSERT_TRUE(BitIdentical(level[l], p.levels[l])) << "level " << l;
  }

  // Head.
  const ConvSpec pw = ConvSpec::Pointwise();
  const Tensor a32 = ApplyConvLayer(DpcForward(level[3], w.head.dpc32), w.head.proj32, pw);
  const Tensor d16 = ApplyConvLayer(DpcForward(level[2], w.head.dpc16), w.head.proj16, pw);
  const Tensor a16 = Add(d16, BilinearResize(a32, d16.h(), d16.w()));
  const Tensor a8 = Add(LsfeForward(level[1], w.head.lsfe8), McForward(a16, w.head.mc16));
  const Tensor a4 = Add(LsfeForward(level[0], w.head.lsfe4), McForward(a8, w.head.mc8));
  const int h = a4.h(), wd = a4.w();
  const std::vector<Tensor> parts = {a4, BilinearResize(a8, h, wd), BilinearResize(a16, h, wd),
                                     BilinearResize(a32, h, wd)};
  const Tensor logits4 = ApplyConvLayer(ConcatChannels(parts), w.head.classifier, pw, false);
  const Tensor logits = BilinearResize(logits4, 4 * h, 4 * wd);
  EXPECT_TRUE(BitIdentical(out.logits, logits));
  EXPECT_TRUE(BitIdentical(out.probabilities, Activate(logits, Activation::ChannelSoftmax())));
}

TEST(TwoWayFpnTest, ZeroBottomUpReducesToTopDown) {
  const EncoderFeatures feats = StubEncoder(64, 64, kSmallEncoder, 65);
  NetworkWeights w = RandomNetworkWeights(kSmallEncoder, 3, 66);
  for (BlockWeights& b : w.fpn.bottom_up_lateral) {
    for (auto& [name, layer] : b.layers) {
      layer.weights = Tensor(layer.weights.dims());
      std::fill(layer.shift.begin(), layer.shift.end(), 0.0f);
    }
  }
  FpnTrace trace;
  const PyramidFeatures p = TwoWayFpnForward(feats, w.fpn, &trace);
  Tensor td = FpnLateralForward(feats.levels[3], w.fpn.top_down_lateral[3]);
  for (int l = 3; l >= 0; --l) {
    if (l < 3) {
      const Tensor lat = FpnLateralForward(feats.levels[l], w.fpn.top_down_lateral[l]);
      td = Add(lat, BilinearResize(td, lat.h(), lat.w()));
    }
    for (float v : trace.bottom_up[l].data()) ASSERT_EQ(v, 0.0f);
    EXPECT_TRUE(BitIdentical(p.levels[l], FpnOutputForward(td, w.fpn.output[l])));
  }
}

TEST(SemanticHeadTest, ZeroClassifierGivesUniformProbabilities) {
  const EncoderFeatures feats = StubEncoder(32, 64, kSmallEncoder, 67);
  NetworkWeights w = RandomNetworkWeights(kSmallEncoder, 4, 68);
  w.head.classifier.weights = Tensor(w.head.classifier.weights.dims());
  std::fill(w.head.classifier.bias.begin(), w.head.classifier.bias.end(), 0.0f);
  const SemanticOutput out = SemanticHeadForward(TwoWayFpnForward(feats, w.fpn), w.head, 4);
  for (float v : out.probabilities.data()) EXPECT_FLOAT_EQ(v, 0.25f);
}

TEST(SemanticHeadTest, BatchItemsAreIndependent) {
  const EncoderFeatures two = StubEncoder(32, 32, kSmallEncoder, 69, 2);
  const NetworkWeights w = RandomNetworkWeights(kSmallEncoder, 3, 70);
  const SemanticOutput batched = SemanticHeadForward(TwoWayFpnForward(two, w.fpn), w.head, 3);
  for (int n = 0; n < 2; ++n) {
    EncoderFeatures one;
    for (int l = 0; l < kNumLevels; ++l) one.levels[l] = Batch(two.levels[l], n);
    const SemanticOutput single = SemanticHeadForward(TwoWayFpnForward(one, w.fpn), w.head, 3);
    EXPECT_TRUE(BitIdentical(single.logits, Batch(batched.logits, n)));
  }
}

TEST(SemanticPipelineTest, RejectsBadInputs) {
  EXPECT_THROW(StubEncoder(48, 64, kSmallEncoder, 1), ShapeError);
  EncoderFeatures feats = StubEncoder(64, 64, kSmallEncoder, 71);
  feats.levels[2] = Tensor(Dims{1, 16, 3, 4});
  EXPECT_THROW(ValidateEncoderFeatures(feats), ShapeError);
  const NetworkWeights w = RandomNetworkWeights(kSmallEncoder, 3, 72);
  const EncoderFeatures wrong = StubEncoder(64, 64, {8, 12, 16, 32}, 73);
  EXPECT_THROW(TwoWayFpnForward(wrong, w.fpn), ShapeError);
}

TEST(WeightsIoTest, RoundTripIsExact) {
  const NetworkWeights w = RandomNetworkWeights(kSmallEncoder, 3, 74);
  const auto dir = std::filesystem::temp_directory_path() / "panoptic_weights_io_test";
  std::filesystem::remove_all(dir);
  WriteNetworkWeights(dir, w);
  const NetworkWeights r = ReadNetworkWeights(dir);
  const EncoderFeatures feats = StubEncoder(32, 32, kSmallEncoder, 75);
  const SemanticOutput a = SemanticHeadForward(TwoWayFpnForward(feats, w.fpn), w.head, 3);
  const SemanticOutput b = SemanticHeadForward(TwoWayFpnForward(feats, r.fpn), r.head, 3);
  EXPECT_TRUE(BitIdentical(a.logits, b.logits));
  std::filesystem::remove(dir / "manifest.json");
  EXPECT_THROW(ReadNetworkWeights(dir), InputError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace panoptic
