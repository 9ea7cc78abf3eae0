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

#include "oracles.h"

#include <cmath>
#include <set>
#include <utility>

namespace panoptic::testing {

Tensor RandomTensor(Dims dims, Rng& rng, double lo, double hi) {
  std::vector<float> values(dims.size());
  for (float& v : values) v = static_cast<float>(rng.Uniform(lo, hi));
  return Tensor(dims, std::move(values));
}

Tensor NaiveConv2d(const Tensor& input, const Tensor& weights, const ConvSpec& spec,
                   const std::vector<float>& bias) {
  const int kh = spec.kernel.h, kw = spec.kernel.w;
  const int dh = spec.dilation.h, dw = spec.dilation.w;
  int top, left, out_h, out_w;
  if (spec.padding.same) {
    top = dh * (kh - 1) / 2;
    left = dw * (kw - 1) / 2;
    out_h = (input.h() - 1) / spec.stride + 1;
    out_w = (input.w() - 1) / spec.stride + 1;
  } else {
    top = spec.padding.h;
    left = spec.padding.w;
    out_h = (input.h() + 2 * top - dh * (kh - 1) - 1) / spec.stride + 1;
    out_w = (input.w() + 2 * left - dw * (kw - 1) - 1) / spec.stride + 1;
  }
  const int out_c = weights.n();
  const int group_in = input.c() / spec.groups;
  const int group_out = out_c / spec.groups;
  Tensor out(Dims{input.n(), out_c, out_h, out_w});
  for (int n = 0; n < input.n(); ++n) {
    for (int oc = 0; oc < out_c; ++oc) {
      const int g = oc / group_out;
      for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
          long double acc = bias.empty() ? 0.0L : bias[oc];
          for (int ic = 0; ic < group_in; ++ic) {
            for (int ky = 0; ky < kh; ++ky) {
              for (int kx = 0; kx < kw; ++kx) {
                const int y = oy * spec.stride - top + ky * dh;
                const int x = ox * spec.stride - left + kx * dw;
                if (y < 0 || y >= input.h() || x < 0 || x >= input.w()) continue;
                acc += static_cast<long double>(input.at(n, g * group_in + ic, y, x)) *
                       weights.at(oc, ic, ky, kx);
              }
            }
          }
          out.at(n, oc, oy, ox) = static_cast<float>(acc);
        }
      }
    }
  }
  return out;
}

long double FuseOracle(long double a, long double b) {
  const long double sa = 1.0L / (1.0L + std::exp(-a));
  const long double sb = 1.0L / (1.0L + std::exp(-b));
  return (sa + sb) * (a + b);
}

namespace {

using Key = std::pair<std::int32_t, std::int32_t>;

struct Segment {
  Key key;
  std::vector<std::size_t> pixels;
};

std::vector<Segment> Segments(const PanopticMap& m, bool skip_crowd,
                              const ClassConfig& classes) {
  std::set<Key> keys;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.class_map[i] == m.void_id) continue;
    if (skip_crowd && m.instance_map[i] == 0 && classes.is_thing(m.class_map[i])) continue;
    keys.insert({m.class_map[i], m.instance_map[i]});
  }
  std::vector<Segment> out;
  for (const Key& k : keys) {
    Segment s{k, {}};
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.class_map[i] == k.first && m.instance_map[i] == k.second) s.pixels.push_back(i);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::map<std::int32_t, OracleClassCounts> BruteForcePq(const PanopticMap& pred,
                                                       const PanopticMap& gt,
                                                       const ClassConfig& classes) {
  const std::vector<Segment> ps = Segments(pred, false, classes);
  const std::vector<Segment> gs = Segments(gt, true, classes);
  // iou[g][p]
  std::vector<std::vector<double>> iou(gs.size(), std::vector<double>(ps.size(), 0.0));
  for (std::size_t gi = 0; gi < gs.size(); ++gi) {
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
      std::int64_t inter = 0, pred_void = 0;
      for (std::size_t px : ps[pi].pixels) {
        if (gt.class_map[px] == gt.void_id) ++pred_void;
        if (gt.class_map[px] == gs[gi].key.first && gt.instance_map[px] == gs[gi].key.second) {
          ++inter;
        }
      }
      const std::int64_t uni = static_cast<std::int64_t>(ps[pi].pixels.size()) +
                               static_cast<std::int64_t>(gs[gi].pixels.size()) - inter -
                               pred_void;
      iou[gi][pi] = static_cast<double>(inter) / static_cast<double>(uni);
    }
  }
  std::map<std::int32_t, OracleClassCounts> counts;
  std::vector<bool> pred_matched(ps.size(), false);
  for (std::size_t gi = 0; gi < gs.size(); ++gi) {
    int match = -1;
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
      if (ps[pi].key.first == gs[gi].key.first && iou[gi][pi] > 0.5) {
        match = static_cast<int>(pi);
      }
    }
    OracleClassCounts& c = counts[gs[gi].key.first];
    if (match < 0) {
      ++c.fn;
    } else {
      ++c.tp;
      c.iou_sum += iou[gi][match];
      pred_matched[match] = true;
    }
  }
  for (std::size_t pi = 0; pi < ps.size(); ++pi) {
    if (pred_matched[pi]) continue;
    std::int64_t ignored = 0;
    for (std::size_t px : ps[pi].pixels) {
      const bool is_void = gt.class_map[px] == gt.void_id;
      const bool crowd = !is_void && gt.instance_map[px] == 0 &&
                         classes.is_thing(gt.class_map[px]) &&
                         gt.class_map[px] == ps[pi].key.first;
      if (is_void || crowd) ++ignored;
    }
    if (2 * ignored > static_cast<std::int64_t>(ps[pi].pixels.size())) continue;
    ++counts[ps[pi].key.first].fp;
  }
  return counts;
}

PanopticMap MakeMap(int height, int width, std::vector<std::int32_t> classes,
                    std::vector<std::int32_t> instances, std::int32_t void_id) {
  PanopticMap m;
  m.height = height;
  m.width = width;
  m.void_id = void_id;
  m.class_map = std::move(classes);
  m.instance_map = instances.empty()
                       ? std::vector<std::int32_t>(m.class_map.size(), 0)
                       : std::move(instances);
  return m;
}

}  // namespace panoptic::testing
