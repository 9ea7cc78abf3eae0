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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <vector>

#include "panoptic/class_config.h"
#include "panoptic/errors.h"
#include "panoptic/fixture.h"
#include "panoptic/fusion.h"
#include "panoptic/instprep.h"
#include "panoptic/losses.h"
#include "panoptic/metrics.h"
#include "panoptic/panoptic_png.h"
#include "panoptic/param_count.h"
#include "panoptic/ptsr.h"
#include "panoptic/semantic.h"
#include "panoptic/weights_io.h"
#include "worker_pool.h"

#ifndef PANOPTIC_CONFIG_DIR
#define PANOPTIC_CONFIG_DIR "configs"
#endif

namespace panoptic::cli {
namespace {

namespace fs = std::filesystem;

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void Line(std::ostream& out, const std::string& key, double v) {
  out << key << " = " << Fixed(v) << "\n";
}

void Line(std::ostream& out, const std::string& key, std::int64_t v) {
  out << key << " = " << v << "\n";
}

ClassConfig LoadClasses(const std::string& path, RunReport& report) {
  const fs::path p = path.empty() ? ConfigDir() / "cityscapes.classes.json" : fs::path(path);
  report.Echo("classes", p.string());
  return ClassConfig::Load(p);
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  if (!f || !(f << text)) throw FormatError(path.string(), "cannot write");
}

void AddWarnings(RunReport& report, const LossValue& v) {
  report.warnings.insert(report.warnings.end(), v.warnings.begin(), v.warnings.end());
}

std::vector<std::string> PngNames(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError(dir.string() + ": not a directory");
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      names.push_back(entry.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

Tensor ReadInput(const std::string& path, const char* flag) {
  if (path.empty()) throw InputError(std::string("missing required ") + flag);
  return ReadPtsr(path);
}

void RequireSize(const Tensor& t, std::size_t size, const std::string& what) {
  if (t.size() != size) {
    throw ShapeError(what + " has " + std::to_string(t.size()) + " values (" +
                     t.dims().ToString() + "), expected " + std::to_string(size));
  }
}

std::int32_t AsInteger(float v, const std::string& what) {
  if (v != std::floor(v)) {
    throw InputError(what + " value " + std::to_string(v) + " is not an integer");
  }
  return static_cast<std::int32_t>(v);
}

}  // namespace

fs::path ConfigDir() {
  if (const char* env = std::getenv("PANOPTIC_CONFIG_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return PANOPTIC_CONFIG_DIR;
}

void RunFuse(const GlobalOptions& g, const FuseOptions& o, RunReport& report,
             std::ostream& out) {
  const FusionStrategy strategy = ParseFusionStrategy(o.strategy);
  FusionConfig cfg{o.confidence_threshold, o.overlap_threshold, o.min_stuff_area};
  cfg.Validate();
  report.Echo("manifest", o.manifest);
  report.Echo("out_dir", o.out_dir);
  report.Echo("strategy", std::string(FusionStrategyName(strategy)));
  report.Echo("confidence_threshold", Fixed(cfg.confidence_threshold));
  report.Echo("overlap_threshold", Fixed(cfg.overlap_threshold));
  report.Echo("min_stuff_area", std::to_string(cfg.min_stuff_area));
  report.Echo("jobs", std::to_string(g.jobs));
  const ClassConfig classes = LoadClasses(o.classes, report);

  std::vector<ImageRecord> images;
  {
    StageTimer t(report, "load_manifest");
    images = LoadInstanceManifest(o.manifest, classes);
  }
  fs::create_directories(o.out_dir);
  struct Result {
    fs::path png;
    FusionStats stats;
  };
  std::vector<Result> results;
  {
    StageTimer t(report, "fuse");
    results = ParallelMap(g.jobs, images.size(), [&](std::size_t i) {
      const ImageRecord& img = images[i];
      const Tensor semantic = ReadPtsr(img.semantic);
      Result r;
      const PanopticMap map =
          FusePanoptic(semantic, img.instances, classes, cfg, strategy, &r.stats);
      ValidatePanopticMap(map, classes);
      r.png = fs::path(o.out_dir) / (img.name + ".png");
      WritePanopticPng(r.png, map, classes);
      return r;
    });
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    const Result& r = results[i];
    const std::string key = "image." + images[i].name;
    Line(out, key + ".input_instances", static_cast<std::int64_t>(r.stats.input_instances));
    Line(out, key + ".confident_instances",
         static_cast<std::int64_t>(r.stats.confident_instances));
    Line(out, key + ".retained_instances",
         static_cast<std::int64_t>(r.stats.retained_instances));
    report.outputs.push_back(r.png);
    report.outputs.push_back(SidecarPath(r.png));
  }
  Line(out, "images", static_cast<std::int64_t>(images.size()));
}

void RunEval(const GlobalOptions& g, const EvalOptions& o, RunReport& report,
             std::ostream& out) {
  report.Echo("pred_dir", o.pred_dir);
  report.Echo("gt_dir", o.gt_dir);
  report.Echo("jobs", std::to_string(g.jobs));
  const ClassConfig classes = LoadClasses(o.classes, report);
  const std::vector<std::string> pred = PngNames(o.pred_dir);
  const std::vector<std::string> gt = PngNames(o.gt_dir);
  std::vector<std::string> only_pred, only_gt;
  std::set_difference(pred.begin(), pred.end(), gt.begin(), gt.end(),
                      std::back_inserter(only_pred));
  std::set_difference(gt.begin(), gt.end(), pred.begin(), pred.end(),
                      std::back_inserter(only_gt));
  if (!only_pred.empty() || !only_gt.empty()) {
    std::string msg = "prediction and ground-truth files do not match:";
    for (const auto& n : only_pred) msg += " " + n + " (prediction only)";
    for (const auto& n : only_gt) msg += " " + n + " (ground truth only)";
    throw InputError(msg);
  }
  if (gt.empty()) throw InputError(o.gt_dir + ": no .png files");

  struct Result {
    SegmentMatch match;
    PanopticMap pred, gt;
  };
  std::vector<Result> results;
  {
    StageTimer t(report, "match");
    results = ParallelMap(g.jobs, gt.size(), [&](std::size_t i) {
      Result r;
      r.pred = ReadPanopticPng(fs::path(o.pred_dir) / gt[i], classes);
      r.gt = ReadPanopticPng(fs::path(o.gt_dir) / gt[i], classes);
      r.match = MatchSegments(r.pred, r.gt, classes);
      return r;
    });
  }
  PqAccumulator pq(classes);
  MiouAccumulator miou(classes);
  {
    StageTimer t(report, "accumulate");
    for (const Result& r : results) {
      pq.Add(r.match);
      miou.Add(r.pred, r.gt);
    }
  }
  const std::string text = "images = " + std::to_string(gt.size()) + "\n" +
                           FormatEvalReport(pq.Report(), miou.Report());
  out << text;
  if (!o.output.empty()) {
    WriteText(o.output, text);
    report.outputs.push_back(o.output);
  }
}

void RunLoss(const GlobalOptions&, const LossOptions& o, RunReport& report,
             std::ostream& out) {
  report.Echo("component", o.component);
  if (o.component == "semantic") {
    report.Echo("probs", o.probs);
    report.Echo("targets", o.targets);
    const Tensor probs = ReadInput(o.probs, "--probs");
    const Tensor labels = ReadInput(o.targets, "--targets");
    RequireSize(labels, static_cast<std::size_t>(probs.n()) * probs.dims().plane(),
                "label tensor");
    std::vector<std::int32_t> ids;
    for (float v : labels.data()) ids.push_back(AsInteger(v, "label"));
    const LossValue v = SemanticLoss(probs, ids, o.void_label);
    AddWarnings(report, v);
    Line(out, "loss.semantic", v.value);
  } else if (o.component == "objectness") {
    const Tensor targets = ReadInput(o.targets, "--targets");
    const Tensor probs = ReadInput(o.probs, "--probs");
    RequireSize(probs, targets.size(), "probability tensor");
    std::vector<ObjectnessSample> samples;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      samples.push_back({targets.data()[i], probs.data()[i]});
    }
    const LossValue v = ObjectnessLoss(samples);
    AddWarnings(report, v);
    Line(out, "loss.objectness", v.value);
  } else if (o.component == "regression") {
    const Tensor targets = ReadInput(o.targets, "--targets");
    const Tensor preds = ReadInput(o.predictions, "--predictions");
    if (targets.size() % 4 != 0) {
      throw ShapeError("regression targets " + targets.dims().ToString() +
                       " are not rows of four deltas");
    }
    RequireSize(preds, targets.size(), "prediction tensor");
    std::vector<BoxDelta> t, p;
    for (std::size_t i = 0; i < targets.size(); i += 4) {
      auto a = targets.data();
      auto b = preds.data();
      t.push_back({a[i], a[i + 1], a[i + 2], a[i + 3]});
      p.push_back({b[i], b[i + 1], b[i + 2], b[i + 3]});
    }
    const std::int64_t norm = o.normalizer.value_or(static_cast<std::int64_t>(t.size()));
    if (norm <= 0) throw InputError("--normalizer must be positive");
    const LossValue v = RegressionLoss(t, p, static_cast<std::size_t>(norm));
    AddWarnings(report, v);
    Line(out, "loss.regression", v.value);
  } else if (o.component == "classification") {
    const Tensor targets = ReadInput(o.targets, "--targets");
    const Tensor probs = ReadInput(o.probs, "--probs");
    const std::size_t k = targets.size();
    if (static_cast<std::size_t>(probs.n()) != k) {
      throw ShapeError("probabilities " + probs.dims().ToString() + " need one row per " +
                       "target, got " + std::to_string(k) + " targets");
    }
    const std::size_t c = probs.size() / k;
    std::vector<ClassificationSample> samples(k);
    for (std::size_t i = 0; i < k; ++i) {
      samples[i].target = AsInteger(targets.data()[i], "target");
      auto row = probs.data().subspan(i * c, c);
      samples[i].distribution.assign(row.begin(), row.end());
    }
    const LossValue v = ClassificationLoss(samples);
    AddWarnings(report, v);
    Line(out, "loss.classification", v.value);
  } else if (o.component == "mask") {
    const Tensor targets = ReadInput(o.targets, "--targets");
    const Tensor probs = ReadInput(o.probs, "--probs");
    RequireSameDims(targets.dims(), probs.dims(), "mask loss inputs");
    if (targets.c() != 1 || targets.h() != kMaskSize || targets.w() != kMaskSize) {
      throw ShapeError("mask tensors must be K x 1 x 28 x 28, got " +
                       targets.dims().ToString());
    }
    std::vector<MaskSample> samples(targets.n());
    for (int k = 0; k < targets.n(); ++k) {
      for (float v : targets.plane(k, 0)) {
        samples[k].target.push_back(static_cast<std::uint8_t>(AsInteger(v, "mask target")));
      }
      auto p = probs.plane(k, 0);
      samples[k].probs.assign(p.begin(), p.end());
    }
    const LossValue v = MaskLoss(samples);
    AddWarnings(report, v);
    Line(out, "loss.mask", v.value);
  } else if (o.component == "total") {
    const LossComponents c{o.semantic, o.objectness, o.proposal_regression,
                           o.classification, o.box_regression, o.mask};
    const LossTotals t = TotalLoss(c);
    Line(out, "loss.semantic", c.semantic);
    Line(out, "loss.objectness", c.objectness);
    Line(out, "loss.proposal_regression", c.proposal_regression);
    Line(out, "loss.classification", c.classification);
    Line(out, "loss.box_regression", c.box_regression);
    Line(out, "loss.mask", c.mask);
    Line(out, "loss.instance", t.instance);
    Line(out, "loss.total", t.total);
  } else {
    throw InputError("unknown loss component '" + o.component + "'");
  }
}

void RunParams(const GlobalOptions&, const ParamsOptions& o, RunReport& report,
               std::ostream& out) {
  const fs::path desc = o.desc.empty() ? ConfigDir() / "mask_head.layers" : fs::path(o.desc);
  report.Echo("desc", desc.string());
  if (!o.compare.empty() && o.compare != "standard") {
    throw InputError("--compare accepts only 'standard', got '" + o.compare + "'");
  }
  const std::vector<LayerDesc> layers = LoadNetworkDescription(desc);
  const ParamCountReport r = CountParams(layers);
  for (const LayerCount& l : r.layers) {
    Line(out, "layer." + l.name + ".params", l.conv_params);
  }
  Line(out, "total", r.total);
  Line(out, "standard_total", r.standard_total);
  Line(out, "separable_total", r.separable_total);
  Line(out, "norm_total", r.norm_total);
  if (o.compare == "standard") {
    const std::vector<LayerDesc> standard = AsStandard(layers);
    const std::int64_t equivalent = CountParams(standard).total;
    Line(out, "standard_equivalent_total", equivalent);
    Line(out, "delta", equivalent - r.total);
    Line(out, "delta_millions", static_cast<double>(equivalent - r.total) / 1e6);
  }
}

void RunForward(const GlobalOptions&, const ForwardOptions& o, RunReport& report,
                std::ostream& out) {
  report.Echo("features", o.features);
  report.Echo("weights", o.weights);
  NetworkWeights weights;
  EncoderFeatures feats;
  {
    StageTimer t(report, "load");
    weights = ReadNetworkWeights(o.weights);
    static constexpr const char* kNames[kNumLevels] = {"c4", "c8", "c16", "c32"};
    for (int l = 0; l < kNumLevels; ++l) {
      feats.levels[l] = ReadPtsr(fs::path(o.features) / (std::string(kNames[l]) + ".ptsr"));
    }
    ValidateEncoderFeatures(feats);
  }
  SemanticOutput result;
  {
    StageTimer t(report, "forward");
    const PyramidFeatures p = TwoWayFpnForward(feats, weights.fpn);
    result = SemanticHeadForward(p, weights.head, weights.n_classes);
  }
  // Finite inputs can still overflow float range inside the network.
  if (!result.logits.AllFinite() || !result.probabilities.AllFinite()) {
    throw InvariantError("forward pass produced non-finite logits");
  }
  WritePtsr(o.out, result.logits);
  report.outputs.push_back(o.out);
  if (!o.probs_out.empty()) {
    WritePtsr(o.probs_out, result.probabilities);
    report.outputs.push_back(o.probs_out);
  }
  out << "logits.dims = " << result.logits.dims().ToString() << "\n";
}

void RunFixture(const GlobalOptions& g, const FixtureOptions& o, RunReport& report,
                std::ostream& out) {
  report.Echo("kind", o.kind);
  report.Echo("seed", std::to_string(g.seed));
  report.Echo("height", std::to_string(o.height));
  report.Echo("width", std::to_string(o.width));
  std::vector<fs::path> written;
  if (o.kind == "panoptic") {
    const ClassConfig classes = LoadClasses(o.classes, report);
    FixtureSpec spec;
    spec.height = o.height;
    spec.width = o.width;
    spec.n_instances = o.instances;
    spec.n_false_positives = o.false_positives;
    report.Echo("count", std::to_string(o.count));
    report.Echo("instances", std::to_string(o.instances));
    report.Echo("false_positives", std::to_string(o.false_positives));
    StageTimer t(report, "generate");
    written = WriteFixtureSet(o.out_dir, g.seed, o.count, spec, classes);
  } else if (o.kind == "network") {
    report.Echo("n_classes", std::to_string(o.n_classes));
    StageTimer t(report, "generate");
    Rng rng(g.seed);
    const NetworkWeights weights =
        RandomNetworkWeights(kDefaultEncoderChannels, o.n_classes, rng.Next());
    const EncoderFeatures feats =
        StubEncoder(o.height, o.width, kDefaultEncoderChannels, rng.Next());
    const fs::path wdir = fs::path(o.out_dir) / "weights";
    const fs::path fdir = fs::path(o.out_dir) / "features";
    WriteNetworkWeights(wdir, weights);
    fs::create_directories(fdir);
    static constexpr const char* kNames[kNumLevels] = {"c4", "c8", "c16", "c32"};
    for (int l = 0; l < kNumLevels; ++l) {
      const fs::path p = fdir / (std::string(kNames[l]) + ".ptsr");
      WritePtsr(p, feats.levels[l]);
      written.push_back(p);
    }
    written.push_back(wdir / "manifest.json");
  } else {
    throw InputError("unknown fixture kind '" + o.kind + "' (expected panoptic or network)");
  }
  report.outputs.insert(report.outputs.end(), written.begin(), written.end());
  Line(out, "files", static_cast<std::int64_t>(written.size()));
}

}  // namespace panoptic::cli
