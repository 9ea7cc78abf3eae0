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


#ifndef PANOPTIC_TOOLS_COMMANDS_H_
#define PANOPTIC_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "run_report.h"

namespace panoptic::cli {

struct GlobalOptions {
  int jobs = 1;
  std::uint64_t seed = 0;
  bool verbose = false;
  std::string report_path;
};

// PANOPTIC_CONFIG_DIR from the environment, else the directory compiled in.
std::filesystem::path ConfigDir();

struct FuseOptions {
  std::string manifest;
  std::string classes;
  std::string out_dir;
  std::string strategy = "adaptive";
  double confidence_threshold = 0.5;
  double overlap_threshold = 0.5;
  std::int64_t min_stuff_area = 2048;
};
void RunFuse(const GlobalOptions& g, const FuseOptions& o, RunReport& report,
             std::ostream& out);

struct EvalOptions {
  std::string pred_dir;
  std::string gt_dir;
  std::string classes;
  std::string output;
};
void RunEval(const GlobalOptions& g, const EvalOptions& o, RunReport& report,
             std::ostream& out);

struct LossOptions {
  std::string component;
  std::string probs;
  std::string targets;
  std::string predictions;
  std::int32_t void_label = 255;
  std::optional<std::int64_t> normalizer;
  double semantic = 0, objectness = 0, proposal_regression = 0;
  double classification = 0, box_regression = 0, mask = 0;
};
void RunLoss(const GlobalOptions& g, const LossOptions& o, RunReport& report,
             std::ostream& out);

struct ParamsOptions {
  std::string desc;
  std::string compare;
};
void RunParams(const GlobalOptions& g, const ParamsOptions& o, RunReport& report,
               std::ostream& out);

struct ForwardOptions {
  std::string features;
  std::string weights;
  std::string out;
  std::string probs_out;
};
void RunForward(const GlobalOptions& g, const ForwardOptions& o, RunReport& report,
                std::ostream& out);

struct FixtureOptions {
  std::string kind;  // panoptic | network
  std::string out_dir;
  std::string classes;
  int count = 2;
  int height = 64;
  int width = 128;
  int instances = 4;
  int false_positives = 1;
  int n_classes = 19;
};
void RunFixture(const GlobalOptions& g, const FixtureOptions& o, RunReport& report,
                std::ostream& out);

}  // namespace panoptic::cli

#endif  // PANOPTIC_TOOLS_COMMANDS_H_
