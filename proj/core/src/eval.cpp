// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#include "dctseg/eval.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "dctseg/codec.hpp"

namespace dctseg {
namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return data;
}

TimingStats stats_of(std::vector<double> samples) {
  TimingStats stats;
  if (samples.empty()) return stats;
  stats.mean_ns = std::accumulate(samples.begin(), samples.end(), 0.0) /
                  static_cast<double>(samples.size());
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  stats.median_ns = (n % 2 == 1)
                        ? samples[n / 2]
                        : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  return stats;
}

}  // namespace

double interval_iou(int top_a, int bottom_a, int top_b, int bottom_b) {
  const int inter_top = std::max(top_a, top_b);
  const int inter_bottom = std::min(bottom_a, bottom_b);
  const int inter = std::max(0, inter_bottom - inter_top + 1);
  const int len_a = bottom_a - top_a + 1;
  const int len_b = bottom_b - top_b + 1;
  const int uni = len_a + len_b - inter;
  if (uni <= 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<LineMatch> match_lines(const SegmentationResult& pred,
                                   const GroundTruth& gt, double tau) {
  if (tau <= 0.0 || tau > 1.0) {
    throw std::invalid_argument("tau must be in (0, 1]");
  }
  std::vector<LineMatch> matches;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < pred.lines.size() && j < gt.lines.size()) {
    const TextLine& p = pred.lines[i];
    const GroundTruth::Line& g = gt.lines[j];
    if (interval_iou(p.top_px, p.bottom_px, g.ink_top_px, g.ink_bottom_px) >=
        tau) {
      matches.push_back({static_cast<int>(i), static_cast<int>(j)});
      ++i;
      ++j;
    } else if (p.bottom_px < g.ink_bottom_px) {
      ++i;
    } else {
      ++j;
    }
  }
  return matches;
}

Metrics compute_metrics(int matched, int predicted, int ground_truth) {
  Metrics m;
  m.matched = matched;
  m.predicted = predicted;
  m.ground_truth = ground_truth;
  if (predicted > 0) {
    m.precision = 100.0 * matched / predicted;
  } else {
    m.degenerate = true;
  }
  if (ground_truth > 0) {
    m.recall = 100.0 * matched / ground_truth;
  } else {
    m.degenerate = true;
  }
  const double pr = m.precision + m.recall;
  m.f_measure = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  return m;
}

SegmentationResult trim_to_ink_rows(const SegmentationResult& pred,
                                    const GroundTruth& gt) {
  SegmentationResult trimmed = pred;
  for (TextLine& line : trimmed.lines) {
    int first = -1;
    int last = -1;
    for (const GroundTruth::Line& g : gt.lines) {
      const int top = std::max(line.top_px, g.ink_top_px);
      const int bottom = std::min(line.bottom_px, g.ink_bottom_px);
      if (top > bottom) continue;
      if (first < 0 || top < first) first = top;
      last = std::max(last, bottom);
    }
    if (first >= 0) {
      line.top_px = first;
      line.bottom_px = last;
    }
  }
  return trimmed;
}

Metrics score_document(const SegmentationResult& pred, const GroundTruth& gt,
                       double tau) {
  const SegmentationResult trimmed = trim_to_ink_rows(pred, gt);
  const std::vector<LineMatch> matches = match_lines(trimmed, gt, tau);
  return compute_metrics(static_cast<int>(matches.size()),
                         static_cast<int>(pred.lines.size()),
                         static_cast<int>(gt.lines.size()));
}

BenchReport bench(const std::vector<ManifestEntry>& entries, int repetitions,
                  const SegmentParams& params) {
  if (repetitions < 3) {
    throw std::invalid_argument("repetitions must be at least 3");
  }
  static constexpr Strategy kStrategies[] = {
      Strategy::PixelBaseline,
      Strategy::PartialDecompression,
      Strategy::AcCoefficients,
  };

  BenchReport report;
  report.repetitions = repetitions;

  struct Samples {
    std::vector<double> stage;
    std::vector<double> end_to_end;
  };
  std::map<int, std::map<Strategy, Samples>> samples_by_tier;

  for (const ManifestEntry& entry : entries) {
    std::vector<std::uint8_t> bytes;
    CoefficientImage image;
    try {
      bytes = read_file(entry.jpeg_path);
      image = parse_jpeg(bytes);
    } catch (const std::exception& e) {
      report.failures.push_back(entry.jpeg_path + ": " + e.what());
      continue;
    }

    for (Strategy strategy : kStrategies) {
      auto& samples = samples_by_tier[entry.tier][strategy];
      (void)segment(image, strategy, params);  // warm-up, discarded
      for (int rep = 0; rep < repetitions; ++rep) {
        const Clock::time_point start = Clock::now();
        const CoefficientImage parsed = parse_jpeg(bytes);
        const SegmentationResult result = segment(parsed, strategy, params);
        const std::int64_t total_ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(
                Clock::now() - start)
                .count();
        samples.stage.push_back(static_cast<double>(result.stage_ns));
        samples.end_to_end.push_back(static_cast<double>(total_ns));
      }
    }
  }

  for (auto& [tier, by_strategy] : samples_by_tier) {
    TierBench tier_bench;
    tier_bench.tier = tier;
    const TimingStats base_stage =
        stats_of(by_strategy[Strategy::PixelBaseline].stage);
    const TimingStats base_e2e =
        stats_of(by_strategy[Strategy::PixelBaseline].end_to_end);
    for (Strategy strategy : kStrategies) {
      ApproachTiming timing;
      timing.strategy = strategy;
      timing.stage = stats_of(by_strategy[strategy].stage);
      timing.end_to_end = stats_of(by_strategy[strategy].end_to_end);
      timing.runs = by_strategy[strategy].stage.size();
      if (base_stage.median_ns > 0.0) {
        timing.improvement_stage_pct =
            100.0 * (1.0 - timing.stage.median_ns / base_stage.median_ns);
      }
      if (base_e2e.median_ns > 0.0) {
        timing.improvement_end_to_end_pct =
            100.0 *
            (1.0 - timing.end_to_end.median_ns / base_e2e.median_ns);
      }
      tier_bench.approaches.push_back(timing);
    }
    report.tiers.push_back(tier_bench);
  }
  return report;
}

}  // namespace dctseg
