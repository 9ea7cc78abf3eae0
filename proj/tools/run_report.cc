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

#include "run_report.h"

#include <cstdio>

namespace panoptic::cli {

std::string RunReport::ToText() const {
  std::string out = "command = " + command + "\n";
  for (const auto& [key, value] : config) out += "config." + key + " = " + value + "\n";
  char buf[64];
  for (const auto& [stage, ms] : timings_ms) {
    std::snprintf(buf, sizeof(buf), "%.6f", ms < 0.0 ? 0.0 : ms);
    out += "timing." + stage + "_ms = " + buf + "\n";
  }
  for (const auto& path : outputs) out += "output = " + path.string() + "\n";
  for (const auto& w : warnings) out += "warning = " + w + "\n";
  return out;
}

}  // namespace panoptic::cli
