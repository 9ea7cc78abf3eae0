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

#include "panoptic/metrics.h"

#include <cstdio>
#include <set>

#include "panoptic/errors.h"

namespace panoptic {
namespace {

void CheckSameSize(const PanopticMap& pred, const PanopticMap& gt) {
  if (pred.height != gt.height || pred.width != gt.width) {
    throw ShapeError("prediction is " + std::to_string(pred.height) + "x" +
                     std::to_string(pred.width) + " but ground truth is " +
                     std::to_string(gt.height) + "x" + std::to_string(gt.width));
  }
}

QualityScores Mean(const std::vector<const ClassQuality*>& rows) {
  QualityScores s;
  for (const ClassQuality* q : rows) {
    s.pq += q->scores.pq;
    s.sq += q->scores.sq;
    s.rq += q->scores.rq;
  }
  s.n = static_cast<int>(rows.size());
  if (s.n > 0) {
    s.pq /= s.n;
    s.sq /= s.n;
    s.rq /= s.n;
  }
  return s;
}

std::int64_t Get(const std::map<SegmentKey, std::int64_t>& m, const SegmentKey& k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

SegmentMatch MatchSegments(const PanopticMap& pred, const PanopticMap& gt,
                           const ClassConfig& classes) {
  CheckSameSize(pred, gt);
  ValidatePanopticMap(pred, classes);
  ValidatePanopticMap(gt, classes);
  const std::int32_t void_id = classes.void_id();

  std::map<SegmentKey, std::int64_t> pred_area, gt_area, pred_void, pred_crowd;
  std::map<std::pair<SegmentKey, SegmentKey>, std::int64_t> overlap;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const SegmentKey g{gt.class_map[i], gt.instance_map[i]};
    const SegmentKey p{pred.class_map[i], pred.instance_map[i]};
    const bool gt_void = g.class_id == void_id;
    const bool gt_crowd = !gt_void && g.instance == 0 && classes.is_thing(g.class_id);
    if (p.class_id != void_id) {
      ++pred_area[p];
      if (gt_void) ++pred_void[p];
      if (gt_crowd && g.class_id == p.class_id) ++pred_crowd[p];
    }
    if (gt_void || gt_crowd) continue;
    ++gt_area[g];
    if (p.class_id != void_id) ++overlap[{g, p}];
  }

  SegmentMatch match;
  std::set<SegmentKey> matched_pred, matched_gt;
  // Map order is (gt key, pred key), so true positives come out sorted.
  for (const auto& [pair, inter] : overlap) {
    const auto& [g, p] = pair;
    if (g.class_id != p.class_id) continue;
    const std::int64_t uni = pred_area[p] + gt_area[g] - inter - Get(pred_void, p);
    const double iou = static_cast<double>(inter) / static_cast<double>(uni);
    if (iou <= kMatchIou) continue;
    if (matched_gt.contains(g) || matched_pred.contains(p)) {
      throw InvariantError("segment matched twice at IoU " + std::to_string(iou));
    }
    matched_gt.insert(g);
    matched_pred.insert(p);
    match.true_positives.push_back({g.class_id, p.instance, g.instance, iou});
  }
  for (const auto& [g, area] : gt_area) {
    if (!matched_gt.contains(g)) match.false_negatives.push_back(g);
  }
  for (const auto& [p, area] : pred_area) {
    if (matched_pred.contains(p)) continue;
    const std::int64_t ignored = Get(pred_void, p) + Get(pred_crowd, p);
    if (static_cast<double>(ignored) / static_cast<double>(area) > kMatchIou) continue;
    match.false_positives.push_back(p);
  }
  return match;
}

PqAccumulator::PqAccumulator(const ClassConfig& classes) : classes_(classes) {}

void PqAccumulator::Add(const SegmentMatch& match) {
  for (const TruePositive& tp : match.true_positives) {
    Counts& c = counts_[tp.class_id];
    ++c.tp;
    c.iou_sum += tp.iou;
  }
  for (const SegmentKey& k : match.false_positives) ++counts_[k.class_id].fp;
  for (const SegmentKey& k : match.false_negatives) ++counts_[k.class_id].fn;
}

PqReport PqAccumulator::Report() const {
  PqReport report;
  for (const ClassInfo& info : classes_.classes()) {
    auto it = counts_.find(info.id);
    if (it == counts_.end()) continue;
    const Counts& c = it->second;
    if (c.tp + c.fp + c.fn == 0) continue;
    ClassQuality q;
    q.class_id = info.id;
    q.is_thing = info.is_thing;
    q.tp = c.tp;
    q.fp = c.fp;
    q.fn = c.fn;
    q.iou_sum = c.iou_sum;
    const double denom = static_cast<double>(c.tp) + 0.5 * static_cast<double>(c.fp) +
                         0.5 * static_cast<double>(c.fn);
    q.scores.pq = c.iou_sum / denom;
    q.scores.sq = c.tp > 0 ? c.iou_sum / static_cast<double>(c.tp) : 0.0;
    q.scores.rq = static_cast<double>(c.tp) / denom;
    q.scores.n = 1;
    report.per_class.push_back(q);
  }
  std::vector<const ClassQuality*> all, stuff, things;
  for (const ClassQuality& q : report.per_class) {
    all.push_back(&q);
    (q.is_thing ? things : stuff).push_back(&q);
  }
  report.all = Mean(all);
  report.stuff = Mean(stuff);
  report.things = Mean(things);
  return report;
}

PqReport ComputePq(const SegmentMatch& match, const ClassConfig& classes) {
  PqAccumulator acc(classes);
  acc.Add(match);
  return acc.Report();
}

MiouAccumulator::MiouAccumulator(const ClassConfig& classes)
    : classes_(classes),
      intersection_(classes.size(), 0),
      gt_(classes.size(), 0),
      pred_(classes.size(), 0) {}

void MiouAccumulator::Add(const PanopticMap& pred, const PanopticMap& gt) {
  CheckSameSize(pred, gt);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt.class_map[i] == classes_.void_id()) continue;
    const std::optional<int> g = classes_.channel_of(gt.class_map[i]);
    if (!g) {
      throw InputError("ground truth class " + std::to_string(gt.class_map[i]) +
                       " at pixel " + std::to_string(i) + " is not in the class table");
    }
    ++gt_[*g];
    if (pred.class_map[i] == classes_.void_id()) continue;
    const std::optional<int> p = classes_.channel_of(pred.class_map[i]);
    if (!p) {
      throw InputError("predicted class " + std::to_string(pred.class_map[i]) +
                       " at pixel " + std::to_string(i) + " is not in the class table");
    }
    ++pred_[*p];
    if (*p == *g) ++intersection_[*g];
  }
}

MiouReport MiouAccumulator::Report() const {
  MiouReport report;
  double sum = 0.0;
  for (int c = 0; c < classes_.size(); ++c) {
    if (gt_[c] == 0) continue;
    ClassIou row;
    row.class_id = classes_.classes()[c].id;
    row.intersection = intersection_[c];
    row.gt_pixels = gt_[c];
    row.pred_pixels = pred_[c];
    row.iou = static_cast<double>(intersection_[c]) /
              static_cast<double>(gt_[c] + pred_[c] - intersection_[c]);
    sum += row.iou;
    report.per_class.push_back(row);
  }
  if (!report.per_class.empty()) report.miou = sum / report.per_class.size();
  return report;
}

MiouReport ComputeMiou(const PanopticMap& pred, const PanopticMap& gt,
                       const ClassConfig& classes) {
  MiouAccumulator acc(classes);
  acc.Add(pred, gt);
  return acc.Report();
}

std::string FormatEvalReport(const PqReport& pq, const MiouReport& miou) {
  std::string out;
  char buf[160];
  auto number = [&](const std::string& key, double v) {
    std::snprintf(buf, sizeof(buf), "%s = %.6f\n", key.c_str(), v);
    out += buf;
  };
  auto count = [&](const std::string& key, std::int64_t v) {
    out += key + " = " + std::to_string(v) + "\n";
  };
  for (const auto& [name, s] : {std::pair{"all", pq.all}, std::pair{"stuff", pq.stuff},
                                std::pair{"things", pq.things}}) {
    number(std::string("pq.") + name, s.pq);
    number(std::string("sq.") + name, s.sq);
    number(std::string("rq.") + name, s.rq);
    count(std::string("n.") + name, s.n);
  }
  for (const ClassQuality& q : pq.per_class) {
    const std::string key = "class." + std::to_string(q.class_id);
    number(key + ".pq", q.scores.pq);
    number(key + ".sq", q.scores.sq);
    number(key + ".rq", q.scores.rq);
    count(key + ".tp", q.tp);
    count(key + ".fp", q.fp);
    count(key + ".fn", q.fn);
  }
  for (const ClassIou& c : miou.per_class) number("iou." + std::to_string(c.class_id), c.iou);
  number("miou", miou.miou);
  return out;
}

}  // namespace panoptic
