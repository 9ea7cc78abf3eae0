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

// panoptic: command-line front end. See README.md for the command reference.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "panoptic/errors.h"

namespace {

using panoptic::cli::RunReport;

constexpr int kExitInput = 1;
constexpr int kExitInvariant = 2;

void EmitReport(const panoptic::cli::GlobalOptions& g, const RunReport& report) {
  const std::string text = report.ToText();
  if (g.verbose) std::cerr << text;
  if (!g.report_path.empty()) {
    std::ofstream f(g.report_path, std::ios::trunc);
    if (!f || !(f << text)) {
      throw panoptic::FormatError(g.report_path, "cannot write report");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = panoptic::cli;
  CLI::App app{"Panoptic fusion, evaluation and loss toolkit"};
  app.require_subcommand(1);
  cli::GlobalOptions g;
  app.add_option("--jobs", g.jobs, "Worker threads for per-image work")
      ->check(CLI::Range(1, 256));
  app.add_option("--seed", g.seed, "Seed for fixture generation");
  app.add_flag("--verbose", g.verbose, "Print the run report to stderr");
  app.add_option("--report", g.report_path, "Write the run report to this file");
  app.footer("Default configuration files are read from $PANOPTIC_CONFIG_DIR, or from " +
             cli::ConfigDir().string() + " when it is unset.");

  RunReport report;
  std::function<void()> run;

  cli::FuseOptions fuse;
  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse semantic and instance predictions");
  fuse_cmd->add_option("--manifest", fuse.manifest, "Instance manifest (JSON)")->required();
  fuse_cmd->add_option("--classes", fuse.classes, "Class table (JSON)");
  fuse_cmd->add_option("--out-dir", fuse.out_dir, "Directory for panoptic PNGs")->required();
  fuse_cmd->add_option("--strategy", fuse.strategy, "adaptive, add, multiply or baseline");
  fuse_cmd->add_option("--ct", fuse.confidence_threshold, "Confidence threshold");
  fuse_cmd->add_option("--ot", fuse.overlap_threshold, "Overlap threshold");
  fuse_cmd->add_option("--min-stuff-area", fuse.min_stuff_area, "Minimum stuff area");
  fuse_cmd->callback([&] {
    report.command = "fuse";
    run = [&] { cli::RunFuse(g, fuse, report, std::cout); };
  });

  cli::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Panoptic quality and mIoU of a prediction set");
  eval_cmd->add_option("--pred-dir", eval.pred_dir, "Predicted panoptic PNGs")->required();
  eval_cmd->add_option("--gt-dir", eval.gt_dir, "Ground-truth panoptic PNGs")->required();
  eval_cmd->add_option("--classes", eval.classes, "Class table (JSON)");
  eval_cmd->add_option("--output", eval.output, "Also write the metric report here");
  eval_cmd->callback([&] {
    report.command = "eval";
    run = [&] { cli::RunEval(g, eval, report, std::cout); };
  });

  cli::LossOptions loss;
  auto* loss_cmd = app.add_subcommand("loss", "Evaluate a training loss");
  loss_cmd->require_subcommand(1);
  auto add_loss = [&](const std::string& name, const std::string& help) {
    auto* sub = loss_cmd->add_subcommand(name, help);
    sub->callback([&, name] {
      loss.component = name;
      report.command = "loss " + name;
      run = [&] { cli::RunLoss(g, loss, report, std::cout); };
    });
    return sub;
  };
  auto* semantic = add_loss("semantic", "Weighted per-pixel log loss");
  semantic->add_option("--probs", loss.probs, "N x C x H x W softmax output")->required();
  semantic->add_option("--targets", loss.targets, "N x 1 x H x W channel labels")->required();
  semantic->add_option("--void-label", loss.void_label, "Label value of void pixels");
  auto* objectness = add_loss("objectness", "Anchor objectness log loss");
  objectness->add_option("--targets", loss.targets, "Labels in {0, 1}")->required();
  objectness->add_option("--probs", loss.probs, "Predicted objectness")->required();
  auto* regression = add_loss("regression", "Smooth L1 box regression loss");
  regression->add_option("--targets", loss.targets, "Rows of (tx, ty, tw, th)")->required();
  regression->add_option("--predictions", loss.predictions, "Predicted deltas")->required();
  regression->add_option("--normalizer", loss.normalizer, "Sample set size");
  auto* classification = add_loss("classification", "Cross-entropy over sampled proposals");
  classification->add_option("--targets", loss.targets, "Target class indices")->required();
  classification->add_option("--probs", loss.probs, "K x C distributions")->required();
  auto* mask = add_loss("mask", "Per-instance binary cross-entropy");
  mask->add_option("--targets", loss.targets, "K x 1 x 28 x 28 in {0, 1, 255}")->required();
  mask->add_option("--probs", loss.probs, "K x 1 x 28 x 28 probabilities")->required();
  auto* total = add_loss("total", "Sum of the component losses");
  total->add_option("--semantic", loss.semantic);
  total->add_option("--objectness", loss.objectness);
  total->add_option("--proposal-regression", loss.proposal_regression);
  total->add_option("--classification", loss.classification);
  total->add_option("--box-regression", loss.box_regression);
  total->add_option("--mask", loss.mask);

  cli::ParamsOptions params;
  auto* params_cmd = app.add_subcommand("params", "Count parameters of a layer description");
  params_cmd->add_option("--desc", params.desc, "Network description file");
  params_cmd->add_option("--compare", params.compare, "'standard': report the saving");
  params_cmd->callback([&] {
    report.command = "params";
    run = [&] { cli::RunParams(g, params, report, std::cout); };
  });

  cli::ForwardOptions forward;
  auto* forward_cmd = app.add_subcommand("forward", "Run the FPN and semantic head");
  forward_cmd->add_option("--features", forward.features, "Directory with c4..c32.ptsr")
      ->required();
  forward_cmd->add_option("--weights", forward.weights, "Weight bundle directory")->required();
  forward_cmd->add_option("--out", forward.out, "Output logits (PTSR)")->required();
  forward_cmd->add_option("--probs-out", forward.probs_out, "Output probabilities (PTSR)");
  forward_cmd->callback([&] {
    report.command = "forward";
    run = [&] { cli::RunForward(g, forward, report, std::cout); };
  });

  cli::FixtureOptions fixture;
  auto* fixture_cmd = app.add_subcommand("fixture", "Generate seeded synthetic inputs");
  fixture_cmd->add_option("kind", fixture.kind, "panoptic or network")->required();
  fixture_cmd->add_option("--out-dir", fixture.out_dir, "Output directory")->required();
  fixture_cmd->add_option("--classes", fixture.classes, "Class table (JSON)");
  fixture_cmd->add_option("--count", fixture.count, "Number of images");
  fixture_cmd->add_option("--height", fixture.height, "Image height");
  fixture_cmd->add_option("--width", fixture.width, "Image width");
  fixture_cmd->add_option("--instances", fixture.instances, "Objects per image");
  fixture_cmd->add_option("--false-positives", fixture.false_positives,
                          "Spurious detections per image");
  fixture_cmd->add_option("--n-classes", fixture.n_classes, "Classifier outputs (network)");
  fixture_cmd->callback([&] {
    report.command = "fixture";
    run = [&] { cli::RunFixture(g, fixture, report, std::cout); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    run();
    EmitReport(g, report);
    return 0;
  } catch (const panoptic::InvariantError& e) {
    report.warnings.push_back(std::string("invariant violation: ") + e.what());
    std::cerr << "error: invariant violation: " << e.what() << "\n";
    EmitReport(g, report);
    return kExitInvariant;
  } catch (const panoptic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kExitInvariant;
  }
}
