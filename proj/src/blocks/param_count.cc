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

#include "panoptic/param_count.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "panoptic/errors.h"

namespace panoptic {
namespace {

[[noreturn]] void Fail(const std::string& source, int line,
                       const std::string& message) {
  throw FormatError(source, "line " + std::to_string(line) + ": " + message);
}

int ParsePositive(std::string_view value, const std::string& key,
                  const std::string& source, int line) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || out < 1) {
    Fail(source, line, key + " must be a positive integer, got '" +
                           std::string(value) + "'");
  }
  return out;
}

bool ParseFlag(std::string_view value, const std::string& key,
               const std::string& source, int line) {
  if (value == "0") return false;
  if (value == "1") return true;
  Fail(source, line, key + " must be 0 or 1, got '" + std::string(value) + "'");
}

}  // namespace

std::string_view LayerKindName(LayerKind kind) {
  return kind == LayerKind::kSeparable ? "separable" : "standard";
}

std::int64_t ConvParams(const LayerDesc& l) {
  const std::int64_t k = static_cast<std::int64_t>(l.kernel.h) * l.kernel.w;
  const std::int64_t in = l.in_channels;
  const std::int64_t out = l.out_channels;
  std::int64_t n = l.kind == LayerKind::kSeparable
                       ? k * in + in * out
                       : k * (in / l.groups) * out;
  if (l.bias) n += out;
  return n;
}

ParamCountReport CountParams(std::span<const LayerDesc> layers) {
  ParamCountReport report;
  for (const LayerDesc& l : layers) {
    const std::int64_t conv = ConvParams(l);
    const std::int64_t norm = l.norm ? 2 * static_cast<std::int64_t>(l.out_channels) : 0;
    report.layers.push_back({l.name, l.kind, conv, norm});
    report.total += conv;
    (l.kind == LayerKind::kSeparable ? report.separable_total
                                     : report.standard_total) += conv;
    report.norm_total += norm;
  }
  return report;
}

std::vector<LayerDesc> AsStandard(std::span<const LayerDesc> layers) {
  std::vector<LayerDesc> out(layers.begin(), layers.end());
  for (LayerDesc& l : out) {
    if (l.kind == LayerKind::kSeparable) {
      l.kind = LayerKind::kStandard;
      l.groups = 1;
    }
  }
  return out;
}

std::vector<LayerDesc> ParseNetworkDescription(std::string_view text,
                                               const std::string& source) {
  std::vector<LayerDesc> layers;
  std::set<std::string, std::less<>> names;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  bool saw_version = false;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream tokens(raw);
    std::string directive;
    if (!(tokens >> directive)) continue;
    if (directive == "version") {
      std::string v;
      tokens >> v;
      if (v != "1") Fail(source, line, "unsupported description version '" + v + "'");
      saw_version = true;
      continue;
    }
    if (directive != "layer") {
      Fail(source, line, "unknown directive '" + directive + "'");
    }
    LayerDesc l;
    l.line = line;
    if (!(tokens >> l.name) || l.name.find('=') != std::string::npos) {
      Fail(source, line, "layer needs a name");
    }
    if (!names.insert(l.name).second) {
      Fail(source, line, "duplicate layer name '" + l.name + "'");
    }
    bool have_kind = false, have_kernel = false, have_in = false, have_out = false;
    std::string field;
    while (tokens >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) Fail(source, line, "expected key=value, got '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string_view value = std::string_view(field).substr(eq + 1);
      if (key == "kind") {
        if (value == "standard") {
          l.kind = LayerKind::kStandard;
        } else if (value == "separable") {
          l.kind = LayerKind::kSeparable;
        } else {
          Fail(source, line, "unknown layer kind '" + std::string(value) + "'");
        }
        have_kind = true;
      } else if (key == "kernel") {
        const auto x = value.find('x');
        if (x == std::string_view::npos) {
          Fail(source, line, "kernel must look like 3x3, got '" + std::string(value) + "'");
        }
        l.kernel.h = ParsePositive(value.substr(0, x), key, source, line);
        l.kernel.w = ParsePositive(value.substr(x + 1), key, source, line);
        have_kernel = true;
      } else if (key == "in") {
        l.in_channels = ParsePositive(value, key, source, line);
        have_in = true;
      } else if (key == "out") {
        l.out_channels = ParsePositive(value, key, source, line);
        have_out = true;
      } else if (key == "groups") {
        l.groups = ParsePositive(value, key, source, line);
      } else if (key == "bias") {
        l.bias = ParseFlag(value, key, source, line);
      } else if (key == "norm") {
        l.norm = ParseFlag(value, key, source, line);
      } else {
        Fail(source, line, "unknown key '" + key + "'");
      }
    }
    if (!have_kind || !have_kernel || !have_in || !have_out) {
      Fail(source, line, "layer '" + l.name + "' needs kind, kernel, in and out");
    }
    if (l.in_channels % l.groups != 0 || l.out_channels % l.groups != 0) {
      Fail(source, line, "groups must divide in and out channels");
    }
    if (l.kind == LayerKind::kSeparable && l.groups != 1) {
      Fail(source, line, "groups is not meaningful for separable layers");
    }
    layers.push_back(std::move(l));
  }
  if (!layers.empty() && !saw_version) {
    Fail(source, 1, "missing 'version 1' directive");
  }
  return layers;
}

std::vector<LayerDesc> LoadNetworkDescription(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, "cannot open network description");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseNetworkDescription(buffer.str(), path);
}

std::vector<LayerDesc> DescribeBlock(const BlockWeights& w,
                                     const std::string& prefix) {
  std::vector<LayerDesc> out;
  for (std::string_view name : RequiredLayers(w.kind)) {
    const ConvLayer& layer = w.layer(name);
    LayerDesc d;
    d.name = prefix + std::string(name);
    d.kind = layer.separable() ? LayerKind::kSeparable : LayerKind::kStandard;
    d.kernel = {layer.weights.h(), layer.weights.w()};
    d.in_channels = layer.in_channels();
    d.out_channels = layer.out_channels();
    d.bias = !layer.bias.empty();
    d.norm = !layer.scale.empty();
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace panoptic
