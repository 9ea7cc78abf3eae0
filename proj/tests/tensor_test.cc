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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "panoptic/errors.h"
#include "panoptic/rng.h"
#include "panoptic/tensor.h"

namespace panoptic {
namespace {

using testing::NaiveConv2d;
using testing::RandomTensor;

Tensor Ones(Dims d) { return Tensor::Filled(d, 1.0f); }

void ExpectNear(const Tensor& a, const Tensor& b, double rel) {
  ASSERT_EQ(a.dims(), b.dims());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max(1.0, std::abs(static_cast<double>(b.data()[i])));
    ASSERT_NEAR(a.data()[i], b.data()[i], rel * scale) << "element " << i;
  }
}

TEST(TensorTest, RejectsNonFiniteValues) {
  EXPECT_THROW(Tensor(Dims{1, 1, 1, 2}, {1.0f, NAN}), InputError);
  EXPECT_THROW(Tensor(Dims{1, 1, 1, 2}, {1.0f, INFINITY}), InputError);
  EXPECT_THROW(Tensor(Dims{1, 1, 2, 2}, {1.0f}), ShapeError);
  EXPECT_THROW(Tensor(Dims{0, 1, 1, 1}), ShapeError);
}

TEST(Conv2dTest, IdentityKernel) {
  Rng rng(1);
  const Tensor x = RandomTensor({1, 1, 3, 3}, rng);
  const Tensor k = Ones({1, 1, 1, 1});
  EXPECT_TRUE(BitIdentical(Conv2d(x, k, ConvSpec::Pointwise()), x));
}

TEST(Conv2dTest, OnesKernelCountsNeighbours) {
  const Tensor y = Conv2d(Ones({1, 1, 3, 3}), Ones({1, 1, 3, 3}), ConvSpec{});
  const std::vector<float> expected = {4, 6, 4, 6, 9, 6, 4, 6, 4};
  EXPECT_EQ(std::vector<float>(y.data().begin(), y.data().end()), expected);
}

TEST(Conv2dTest, DilatedMatchesOffsets) {
  Rng rng(2);
  const Tensor x = RandomTensor({1, 1, 5, 5}, rng);
  const Tensor k = RandomTensor({1, 1, 3, 3}, rng);
  ConvSpec spec;
  spec.dilation = {2, 2};
  const Tensor y = Conv2d(x, k, spec);
  ASSERT_EQ(y.dims(), (Dims{1, 1, 5, 5}));
  for (int oy = 0; oy < 5; ++oy) {
    for (int ox = 0; ox < 5; ++ox) {
      double acc = 0.0;
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          const int yy = oy + 2 * ky - 2, xx = ox + 2 * kx - 2;
          if (yy < 0 || yy >= 5 || xx < 0 || xx >= 5) continue;
          acc += static_cast<double>(x.at(0, 0, yy, xx)) * k.at(0, 0, ky, kx);
        }
      }
      EXPECT_NEAR(y.at(0, 0, oy, ox), acc, 1e-6);
    }
  }
}

TEST(Conv2dTest, MatchesNaiveOracleAcrossSpecs) {
  Rng rng(3);
  for (KernelSize kernel : {KernelSize{1, 1}, KernelSize{3, 3}, KernelSize{2, 3}}) {
    for (int stride : {1, 2}) {
      for (Dilation dil : {Dilation{1, 1}, Dilation{2, 1}}) {
        for (int groups : {1, 2, 4}) {
          for (bool same : {true, false}) {
            ConvSpec spec{kernel, stride, dil, same ? Padding::SameZero() : Padding::Explicit(1, 1),
                          groups, false};
            const Tensor x = RandomTensor({2, 4, 8, 8}, rng);
            const Tensor w = RandomTensor({4, 4 / groups, kernel.h, kernel.w}, rng);
            SCOPED_TRACE(spec.ToString());
            ExpectNear(Conv2d(x, w, spec), NaiveConv2d(x, w, spec), 1e-5);
          }
        }
      }
    }
  }
}

TEST(Conv2dTest, BiasIsAdded) {
  Rng rng(4);
  const Tensor x = RandomTensor({1, 2, 4, 4}, rng);
  const Tensor w = RandomTensor({3, 2, 3, 3}, rng);
  ConvSpec spec;
  spec.bias = true;
  const std::vector<float> bias = {0.5f, -1.0f, 2.0f};
  ExpectNear(Conv2d(x, w, spec, bias), NaiveConv2d(x, w, spec, bias), 1e-6);
  spec.bias = false;
  EXPECT_THROW(Conv2d(x, w, spec, bias), InputError);
}

TEST(Conv2dTest, ShapeErrorNamesBothShapes) {
  const Tensor x = Ones({1, 3, 4, 4});
  const Tensor w = Ones({2, 2, 3, 3});
  try {
    Conv2d(x, w, ConvSpec{});
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("(1, 3, 4, 4)"), std::string::npos) << msg;
    EXPECT_NE(msg.find("(2, 2, 3, 3)"), std::string::npos) << msg;
  }
}

TEST(Conv2dTest, IsLinear) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Tensor x = RandomTensor({1, 2, 8, 8}, rng);
    const Tensor y = RandomTensor({1, 2, 8, 8}, rng);
    const Tensor w = RandomTensor({3, 2, 3, 3}, rng);
    const float a = 0.75f, b = -1.5f;
    Tensor mix(x.dims());
    for (std::size_t i = 0; i < mix.size(); ++i) {
      mix.mutable_data()[i] = a * x.data()[i] + b * y.data()[i];
    }
    const Tensor lhs = Conv2d(mix, w, ConvSpec{});
    const Tensor cx = Conv2d(x, w, ConvSpec{});
    const Tensor cy = Conv2d(y, w, ConvSpec{});
    Tensor rhs(lhs.dims());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      rhs.mutable_data()[i] = a * cx.data()[i] + b * cy.data()[i];
    }
    ExpectNear(lhs, rhs, 1e-5);
  }
}

TEST(Conv2dTest, TranslationEquivariantInInterior) {
  Rng rng(6);
  const Tensor x = RandomTensor({1, 1, 8, 8}, rng);
  const Tensor w = RandomTensor({1, 1, 3, 3}, rng);
  Tensor shifted(x.dims());
  for (int y = 0; y < 8; ++y) {
    for (int c = 1; c < 8; ++c) shifted.at(0, 0, y, c) = x.at(0, 0, y, c - 1);
  }
  const Tensor a = Conv2d(x, w, ConvSpec{});
  const Tensor b = Conv2d(shifted, w, ConvSpec{});
  for (int y = 1; y < 7; ++y) {
    for (int c = 2; c < 7; ++c) EXPECT_EQ(b.at(0, 0, y, c), a.at(0, 0, y, c - 1));
  }
}

TEST(Conv2dTest, RepeatedCallsAreBitIdentical) {
  Rng rng(7);
  const Tensor x = RandomTensor({1, 4, 9, 7}, rng);
  const Tensor w = RandomTensor({4, 4, 3, 3}, rng);
  EXPECT_TRUE(BitIdentical(Conv2d(x, w, ConvSpec{}), Conv2d(x, w, ConvSpec{})));
}

TEST(ConvOutputSizeTest, StandardFormula) {
  EXPECT_EQ(ConvOutputSize(8, 3, 1, 1, 2), 8);
  EXPECT_EQ(ConvOutputSize(8, 3, 2, 1, 2), 4);
  EXPECT_EQ(ConvOutputSize(7, 3, 2, 2, 4), 4);
  EXPECT_EQ(ConvOutputSize(5, 3, 1, 1, 0), 3);
}

TEST(DepthwiseSeparableTest, EqualsTwoStageComposition) {
  Rng rng(8);
  const Tensor x = RandomTensor({2, 4, 6, 5}, rng);
  const Tensor dw = RandomTensor({4, 1, 3, 3}, rng);
  const Tensor pw = RandomTensor({6, 4, 1, 1}, rng);
  ConvSpec spec = ConvSpec::Depthwise(4, {3, 3}, {2, 2});
  const Tensor fused = DepthwiseSeparableConv(x, dw, pw, spec);
  const Tensor staged = Conv2d(Conv2d(x, dw, spec), pw, ConvSpec::Pointwise());
  EXPECT_TRUE(BitIdentical(fused, staged));
}

TEST(DepthwiseSeparableTest, ZeroDepthwiseAnnihilates) {
  Rng rng(9);
  const Tensor x = RandomTensor({1, 3, 5, 5}, rng);
  const Tensor pw = RandomTensor({2, 3, 1, 1}, rng);
  const Tensor y = DepthwiseSeparableConv(x, Tensor(Dims{3, 1, 3, 3}), pw,
                                          ConvSpec::Depthwise(3));
  for (float v : y.data()) EXPECT_EQ(v, 0.0f);
}

TEST(BilinearTest, HalfPixelRow) {
  const Tensor row(Dims{1, 1, 1, 2}, {0.0f, 2.0f});
  const Tensor y = BilinearResize(row, 1, 4);
  EXPECT_EQ(std::vector<float>(y.data().begin(), y.data().end()),
            (std::vector<float>{0.0f, 0.5f, 1.5f, 2.0f}));
}

TEST(BilinearTest, PreservesConstants) {
  const Tensor c = Tensor::Filled({1, 2, 5, 7}, 0.3f);
  for (auto [h, w] : {std::pair{1, 1}, std::pair{10, 14}, std::pair{3, 20}, std::pair{5, 7}}) {
    const Tensor r = BilinearResize(c, h, w);
    for (float v : r.data()) EXPECT_EQ(v, 0.3f);
  }
  const Tensor round_trip = BilinearResize(BilinearResize(c, 20, 28), 5, 7);
  EXPECT_TRUE(BitIdentical(round_trip, c));
}

TEST(BilinearTest, SameSizeIsIdentity) {
  Rng rng(10);
  const Tensor x = RandomTensor({2, 3, 6, 4}, rng);
  EXPECT_TRUE(BitIdentical(BilinearResize(x, 6, 4), x));
}

TEST(ActivationTest, Definitions) {
  const Tensor x(Dims{1, 1, 1, 3}, {-3.0f, 0.0f, 2.0f});
  const Tensor leaky = Activate(x, Activation::LeakyRelu(0.01f));
  EXPECT_FLOAT_EQ(leaky.data()[0], -0.03f);
  EXPECT_EQ(leaky.data()[1], 0.0f);
  EXPECT_EQ(leaky.data()[2], 2.0f);
  EXPECT_EQ(Activate(x, Activation::Sigmoid()).data()[1], 0.5f);
}

TEST(ActivationTest, SoftmaxSumsToOne) {
  Rng rng(11);
  const Tensor x = RandomTensor({2, 7, 4, 5}, rng, -20.0, 20.0);
  const Tensor p = Activate(x, Activation::ChannelSoftmax());
  for (int n = 0; n < 2; ++n) {
    for (std::size_t i = 0; i < x.dims().plane(); ++i) {
      double sum = 0.0;
      for (int c = 0; c < 7; ++c) sum += p.plane(n, c)[i];
      EXPECT_NEAR(sum, 1.0, 1e-6);
    }
  }
}

TEST(AffineNormTest, MatchesScalarLoop) {
  Rng rng(12);
  const Tensor x = RandomTensor({2, 3, 4, 5}, rng);
  const std::vector<float> scale = {0.5f, -2.0f, 1.25f}, shift = {0.1f, 0.0f, -3.0f};
  const Tensor y = AffineNorm(x, scale, shift);
  for (int n = 0; n < 2; ++n) {
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 5; ++j) {
          EXPECT_EQ(y.at(n, c, i, j), x.at(n, c, i, j) * scale[c] + shift[c]);
        }
      }
    }
  }
  EXPECT_TRUE(BitIdentical(AffineNorm(x, std::vector<float>{1, 1, 1}, std::vector<float>{0, 0, 0}), x));
  const Tensor beta = AffineNorm(Tensor(Dims{1, 3, 2, 2}), scale, shift);
  for (int c = 0; c < 3; ++c) {
    for (float v : beta.plane(0, c)) EXPECT_EQ(v, shift[c]);
  }
  EXPECT_THROW(AffineNorm(x, std::vector<float>{1, 1}, std::vector<float>{0, 0}), InputError);
}

TEST(ChannelOpsTest, ConcatThenSliceRoundTrips) {
  Rng rng(13);
  const std::vector<Tensor> parts = {RandomTensor({2, 3, 4, 4}, rng),
                                     RandomTensor({2, 5, 4, 4}, rng)};
  const Tensor cat = ConcatChannels(parts);
  EXPECT_EQ(cat.dims(), (Dims{2, 8, 4, 4}));
  EXPECT_TRUE(BitIdentical(SliceChannels(cat, 0, 3), parts[0]));
  EXPECT_TRUE(BitIdentical(SliceChannels(cat, 3, 5), parts[1]));
}

}  // namespace
}  // namespace panoptic
