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


#ifndef PANOPTIC_TOOLS_RUN_REPORT_H_
#define PANOPTIC_TOOLS_RUN_REPORT_H_

#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace panoptic::cli {

// Summary of one command invocation, written as "key = value" lines.
struct RunReport {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, double>> timings_ms;
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> warnings;

  void Echo(std::string key, std::string value) {
    config.emplace_back(std::move(key), std::move(value));
  }
  std::string ToText() const;
};

// Records the wall time of a stage into a report when it goes out of scope.
class StageTimer {
 public:
  StageTimer(RunReport& report, std::string stage)
      : report_(report), stage_(std::move(stage)), start_(Clock::now()) {}
  ~StageTimer() {
    const std::chrono::duration<double, std::milli> elapsed = Clock::now() - start_;
    report_.timings_ms.emplace_back(stage_, elapsed.count());
  }
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

 private:
  using Clock = std::chrono::steady_clock;
  RunReport& report_;
  std::string stage_;
  Clock::time_point start_;
};

}  // namespace panoptic::cli

#endif  // PANOPTIC_TOOLS_RUN_REPORT_H_
