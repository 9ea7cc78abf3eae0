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


#ifndef PANOPTIC_METRICS_H_
#define PANOPTIC_METRICS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "panoptic/class_config.h"
#include "panoptic/panoptic_map.h"

namespace panoptic {

// IoU threshold above which a same-class pair is a true positive.
inline constexpr double kMatchIou = 0.5;

// A segment is the set of non-void pixels sharing (class id, instance id).
struct SegmentKey {
  std::int32_t class_id = 0;
  std::int32_t instance = 0;
  auto operator<=>(const SegmentKey&) const = default;
};

struct TruePositive {
  std::int32_t class_id = 0;
  std::int32_t pred_instance = 0;
  std::int32_t gt_instance = 0;
  double iou = 0.0;
};

// Matching result of one image. `true_positives` is sorted by (class, gt
// instance); `false_positives` and `false_negatives` by segment key.
struct SegmentMatch {
  std::vector<TruePositive> true_positives;
  std::vector<SegmentKey> false_positives;
  std::vector<SegmentKey> false_negatives;
};

// Panoptic benchmark conventions: void ground-truth pixels are removed from
// the union; thing pixels with instance 0 in the ground truth are crowd
// regions and never count as false negatives; an unmatched prediction whose
// overlap with void plus same-class crowd exceeds half its area is not a
// false positive. Throws ShapeError on a size mismatch and InvariantError
// for invalid maps.
SegmentMatch MatchSegments(const PanopticMap& pred, const PanopticMap& gt,
                           const ClassConfig& classes);

struct QualityScores {
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
  int n = 0;  // classes averaged
};

struct ClassQuality {
  std::int32_t class_id = 0;
  bool is_thing = false;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double iou_sum = 0.0;
  QualityScores scores;
};

struct PqReport {
  std::vector<ClassQuality> per_class;  // class-table order, populated only
  QualityScores all;
  QualityScores stuff;
  QualityScores things;
};

// Dataset-level accumulation: counts and IoU sums are added per class before
// any division. Add images in a fixed order for reproducible sums.
class PqAccumulator {
 public:
  explicit PqAccumulator(const ClassConfig& classes);

  void Add(const SegmentMatch& match);
  PqReport Report() const;

 private:
  struct Counts {
    std::int64_t tp = 0, fp = 0, fn = 0;
    double iou_sum = 0.0;
  };
  ClassConfig classes_;
  std::map<std::int32_t, Counts> counts_;
};

PqReport ComputePq(const SegmentMatch& match, const ClassConfig& classes);

struct ClassIou {
  std::int32_t class_id = 0;
  std::int64_t intersection = 0;
  std::int64_t gt_pixels = 0;
  std::int64_t pred_pixels = 0;
  double iou = 0.0;
};

struct MiouReport {
  std::vector<ClassIou> per_class;  // classes with ground-truth pixels
  double miou = 0.0;
};

// Pixel IoU per class over every added image. Pixels that are void in the
// ground truth are skipped; predicted void counts as a miss.
class MiouAccumulator {
 public:
  explicit MiouAccumulator(const ClassConfig& classes);

  // Throws ShapeError on a size mismatch.
  void Add(const PanopticMap& pred, const PanopticMap& gt);
  MiouReport Report() const;

 private:
  ClassConfig classes_;
  std::vector<std::int64_t> intersection_, gt_, pred_;
};

MiouReport ComputeMiou(const PanopticMap& pred, const PanopticMap& gt,
                       const ClassConfig& classes);

// "key = value" lines, numbers with six decimals:
//   pq.all, sq.all, rq.all, n.all (and .stuff, .things),
//   class.<id>.{pq,sq,rq,tp,fp,fn}, iou.<id>, miou
std::string FormatEvalReport(const PqReport& pq, const MiouReport& miou);

}  // namespace panoptic

#endif  // PANOPTIC_METRICS_H_
