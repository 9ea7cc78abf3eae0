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

#include "panoptic/weights_io.h"

#include <fstream>
#include <functional>
#include <string>

#include "json.hpp"
#include "panoptic/errors.h"
#include "panoptic/ptsr.h"

namespace panoptic {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kFormat = "panoptic-weights";

// Visits every layer of the network with its id. The callback receives the
// ConvLayer and, for block layers, the owning block (to set its kind).
void ForEachLayer(NetworkWeights& w,
                  const std::function<void(const std::string&, ConvLayer&)>& fn) {
  auto block = [&fn](const std::string& prefix, BlockWeights& b, BlockKind kind) {
    b.kind = kind;
    for (std::string_view name : RequiredLayers(kind)) {
      fn(prefix + "." + std::string(name), b.layers[std::string(name)]);
    }
  };
  for (int l = 0; l < kNumLevels; ++l) {
    const std::string s = std::to_string(l);
    block("fpn.td_lateral." + s, w.fpn.top_down_lateral[l], BlockKind::kFpnLateral);
    block("fpn.bu_lateral." + s, w.fpn.bottom_up_lateral[l], BlockKind::kFpnLateral);
    block("fpn.output." + s, w.fpn.output[l], BlockKind::kFpnOutput);
  }
  SemanticHeadWeights& h = w.head;
  block("head.dpc32", h.dpc32, BlockKind::kDpc);
  block("head.dpc16", h.dpc16, BlockKind::kDpc);
  fn("head.proj32", h.proj32);
  fn("head.proj16", h.proj16);
  block("head.lsfe8", h.lsfe8, BlockKind::kLsfe);
  block("head.lsfe4", h.lsfe4, BlockKind::kLsfe);
  block("head.mc16", h.mc16, BlockKind::kMc);
  block("head.mc8", h.mc8, BlockKind::kMc);
  fn("head.classifier", h.classifier);
}

Tensor VectorTensor(const std::vector<float>& v) {
  return Tensor(Dims{1, static_cast<int>(v.size()), 1, 1}, v);
}

std::vector<float> TensorVector(const Tensor& t, const fs::path& path) {
  if (t.n() != 1 || t.h() != 1 || t.w() != 1) {
    throw FormatError(path.string(), "expected a 1 x C x 1 x 1 vector, got " +
                                         t.dims().ToString());
  }
  return {t.data().begin(), t.data().end()};
}

}  // namespace

void WriteNetworkWeights(const fs::path& dir, const NetworkWeights& weights) {
  fs::create_directories(dir);
  NetworkWeights copy = weights;
  json layers = json::object();
  ForEachLayer(copy, [&](const std::string& id, ConvLayer& layer) {
    json entry = json::object();
    auto put = [&](const char* part, const Tensor& t) {
      const std::string file = id + "." + part + ".ptsr";
      WritePtsr(dir / file, t);
      entry[part] = file;
    };
    put("weights", layer.weights);
    if (layer.pointwise) put("pointwise", *layer.pointwise);
    if (!layer.bias.empty()) put("bias", VectorTensor(layer.bias));
    if (!layer.scale.empty()) put("scale", VectorTensor(layer.scale));
    if (!layer.shift.empty()) put("shift", VectorTensor(layer.shift));
    layers[id] = std::move(entry);
  });
  json manifest = {{"format", kFormat},
                   {"version", 1},
                   {"encoder_channels", weights.encoder_channels},
                   {"n_classes", weights.n_classes},
                   {"layers", std::move(layers)}};
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw FormatError((dir / "manifest.json").string(), "cannot write");
  out << manifest.dump(2) << "\n";
}

NetworkWeights ReadNetworkWeights(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw FormatError(manifest_path.string(), "cannot open weight manifest");
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(manifest_path.string(), e.what());
  }
  NetworkWeights w;
  try {
    if (manifest.at("format") != kFormat || manifest.at("version") != 1) {
      throw FormatError(manifest_path.string(), "not a version 1 weight bundle");
    }
    w.encoder_channels =
        manifest.at("encoder_channels").get<std::array<int, kNumLevels>>();
    w.n_classes = manifest.at("n_classes").get<int>();
    const json& layers = manifest.at("layers");
    ForEachLayer(w, [&](const std::string& id, ConvLayer& layer) {
      if (!layers.contains(id)) {
        throw FormatError(manifest_path.string(), "missing layer '" + id + "'");
      }
      const json& entry = layers.at(id);
      auto load = [&](const char* part) { return ReadPtsr(dir / entry.at(part).get<std::string>()); };
      layer.weights = load("weights");
      if (entry.contains("pointwise")) layer.pointwise = load("pointwise");
      if (entry.contains("bias")) {
        layer.bias = TensorVector(load("bias"), dir / entry.at("bias").get<std::string>());
      }
      if (entry.contains("scale")) {
        layer.scale = TensorVector(load("scale"), dir / entry.at("scale").get<std::string>());
      }
      if (entry.contains("shift")) {
        layer.shift = TensorVector(load("shift"), dir / entry.at("shift").get<std::string>());
      }
    });
  } catch (const json::exception& e) {
    throw FormatError(manifest_path.string(), e.what());
  }
  ValidateNetworkWeights(w);
  return w;
}

}  // namespace panoptic
