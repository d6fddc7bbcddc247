// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DCTSEG_EVAL_HPP_
#define DCTSEG_EVAL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dctseg/corpus.hpp"
#include "dctseg/segmenter.hpp"

namespace dctseg {

struct Metrics {
  double precision = 0.0;   // percent
  double recall = 0.0;      // percent
  double f_measure = 0.0;   // percent
  int predicted = 0;
  int ground_truth = 0;
  int matched = 0;
  // Set when a zero denominator forced a metric to 0.
  bool degenerate = false;
};

struct LineMatch {
  int pred_index = 0;
  int gt_index = 0;
};

inline constexpr double kDefaultIouTau = 0.8;

// Vertical intersection-over-union of two inclusive row spans.
double interval_iou(int top_a, int bottom_a, int top_b, int bottom_b);

// Greedy one-to-one top-to-bottom sweep; a pair matches when its vertical
// IoU reaches tau.
std::vector<LineMatch> match_lines(const SegmentationResult& pred,
                                   const GroundTruth& gt,
                                   double tau = kDefaultIouTau);

Metrics compute_metrics(int matched, int predicted, int ground_truth);

// Shrinks each predicted extent to the rows that ground truth marks as
// ink. Boundaries bisect inter-line gaps, so raw predicted extents carry
// half a gap of padding on each side; scoring compares ink against ink.
SegmentationResult trim_to_ink_rows(const SegmentationResult& pred,
                                    const GroundTruth& gt);

Metrics score_document(const SegmentationResult& pred, const GroundTruth& gt,
                       double tau = kDefaultIouTau);

struct TimingStats {
  double median_ns = 0.0;
  double mean_ns = 0.0;
};

struct ApproachTiming {
  Strategy strategy = Strategy::PixelBaseline;
  TimingStats stage;
  TimingStats end_to_end;
  // Percent speedup vs. the pixel baseline on the same timing boundary;
  // 0 for the baseline itself.
  double improvement_stage_pct = 0.0;
  double improvement_end_to_end_pct = 0.0;
  std::size_t runs = 0;
};

struct TierBench {
  int tier = 0;
  std::vector<ApproachTiming> approaches;
};

struct BenchReport {
  std::vector<TierBench> tiers;
  int repetitions = 0;
  // "path: reason" per document that failed; the batch continues.
  std::vector<std::string> failures;
};

// Runs all three strategies over the manifest, one warm-up pass per
// document discarded, then `repetitions` timed single-threaded passes.
BenchReport bench(const std::vector<ManifestEntry>& entries, int repetitions,
                  const SegmentParams& params = {});

}  // namespace dctseg

#endif  // DCTSEG_EVAL_HPP_
