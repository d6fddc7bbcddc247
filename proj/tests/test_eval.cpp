// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <utility>
#include <vector>

#include "dctseg/corpus.hpp"
#include "dctseg/eval.hpp"
#include "dctseg/segmenter.hpp"

using namespace dctseg;
namespace fs = std::filesystem;

namespace {

SegmentationResult make_result(
    const std::vector<std::pair<int, int>>& spans) {
  SegmentationResult result;
  for (const auto& [top, bottom] : spans) {
    TextLine line;
    line.top_px = top;
    line.bottom_px = bottom;
    result.lines.push_back(line);
  }
  return result;
}

GroundTruth make_gt(const std::vector<std::pair<int, int>>& spans) {
  GroundTruth gt;
  for (const auto& [top, bottom] : spans) {
    gt.lines.push_back({top, bottom});
  }
  return gt;
}

// Exhaustive maximum one-to-one matching over the eligibility matrix;
// small inputs only.
int max_matching(const std::vector<std::vector<bool>>& ok,
                 std::size_t pred_index, std::vector<bool>& gt_used) {
  if (pred_index == ok.size()) return 0;
  int best = max_matching(ok, pred_index + 1, gt_used);
  for (std::size_t g = 0; g < gt_used.size(); ++g) {
    if (gt_used[g] || !ok[pred_index][g]) continue;
    gt_used[g] = true;
    best = std::max(best,
                    1 + max_matching(ok, pred_index + 1, gt_used));
    gt_used[g] = false;
  }
  return best;
}

int oracle_matches(const SegmentationResult& pred, const GroundTruth& gt,
                   double tau) {
  std::vector<std::vector<bool>> ok(
      pred.lines.size(), std::vector<bool>(gt.lines.size(), false));
  for (std::size_t p = 0; p < pred.lines.size(); ++p) {
    for (std::size_t g = 0; g < gt.lines.size(); ++g) {
      ok[p][g] = interval_iou(pred.lines[p].top_px, pred.lines[p].bottom_px,
                              gt.lines[g].ink_top_px,
                              gt.lines[g].ink_bottom_px) >= tau;
    }
  }
  std::vector<bool> used(gt.lines.size(), false);
  return max_matching(ok, 0, used);
}

}  // namespace

TEST_CASE("interval iou on inclusive spans") {
  CHECK(interval_iou(0, 9, 0, 9) == doctest::Approx(1.0));
  CHECK(interval_iou(0, 0, 0, 0) == doctest::Approx(1.0));
  CHECK(interval_iou(0, 4, 5, 9) == doctest::Approx(0.0));
  CHECK(interval_iou(0, 9, 5, 14) == doctest::Approx(5.0 / 15.0));
  CHECK(interval_iou(0, 9, 2, 7) == doctest::Approx(6.0 / 10.0));
  // Symmetry.
  CHECK(interval_iou(5, 14, 0, 9) == interval_iou(0, 9, 5, 14));
}

TEST_CASE("identical extents all match") {
  const auto spans = std::vector<std::pair<int, int>>{
      {10, 25}, {40, 55}, {70, 90}};
  const auto matches = match_lines(make_result(spans), make_gt(spans));
  REQUIRE(matches.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(matches[i].pred_index == i);
    CHECK(matches[i].gt_index == i);
  }
}

TEST_CASE("a bisected line matches nothing at the default threshold") {
  const auto pred = make_result({{0, 49}, {50, 99}});
  const auto gt = make_gt({{0, 99}});
  CHECK(match_lines(pred, gt).empty());
  const Metrics m = score_document(pred, gt);
  CHECK(m.matched == 0);
  CHECK(m.predicted == 2);
  CHECK(m.ground_truth == 1);
}

TEST_CASE("threshold validation") {
  const auto pred = make_result({{0, 9}});
  const auto gt = make_gt({{0, 9}});
  CHECK_THROWS_AS(match_lines(pred, gt, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(match_lines(pred, gt, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(match_lines(pred, gt, 1.5), std::invalid_argument);
  CHECK(match_lines(pred, gt, 1.0).size() == 1);
}

TEST_CASE("greedy sweep equals exhaustive matching on sorted lines") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    // Ground truth: sorted, disjoint spans.
    GroundTruth gt;
    int y = static_cast<int>(rng() % 10);
    const int n = 1 + static_cast<int>(rng() % 7);
    for (int i = 0; i < n; ++i) {
      const int height = 8 + static_cast<int>(rng() % 23);
      gt.lines.push_back({y, y + height - 1});
      y += height + 2 + static_cast<int>(rng() % 19);
    }

    // Predictions: per-line jitter, occasional drops, occasional extra
    // spans inside the gaps; still sorted and disjoint.
    SegmentationResult pred;
    int prev_bottom = -1;
    for (const auto& line : gt.lines) {
      if (rng() % 8 == 0) continue;  // dropped line
      TextLine t;
      t.top_px = std::max(prev_bottom + 1,
                          line.ink_top_px - 3 + static_cast<int>(rng() % 7));
      t.bottom_px =
          line.ink_bottom_px - 3 + static_cast<int>(rng() % 7);
      if (t.bottom_px < t.top_px) t.bottom_px = t.top_px;
      pred.lines.push_back(t);
      prev_bottom = t.bottom_px;
      if (rng() % 10 == 0) {
        TextLine extra;
        extra.top_px = prev_bottom + 1;
        extra.bottom_px = extra.top_px + static_cast<int>(rng() % 4);
        pred.lines.push_back(extra);
        prev_bottom = extra.bottom_px;
      }
    }

    const auto greedy = match_lines(pred, gt, kDefaultIouTau);
    CHECK(static_cast<int>(greedy.size()) ==
          oracle_matches(pred, gt, kDefaultIouTau));
    CHECK(greedy.size() <= std::min(pred.lines.size(), gt.lines.size()));
  }
}

TEST_CASE("metrics arithmetic") {
  SUBCASE("nine of ten found, all predictions right") {
    const Metrics m = compute_metrics(9, 9, 10);
    CHECK(m.precision == doctest::Approx(100.0));
    CHECK(m.recall == doctest::Approx(90.0));
    CHECK(std::abs(m.f_measure - 94.73) <= 0.01);
    CHECK_FALSE(m.degenerate);
  }
  SUBCASE("perfect score is exact") {
    const Metrics m = compute_metrics(5, 5, 5);
    CHECK(m.precision == 100.0);
    CHECK(m.recall == 100.0);
    CHECK(m.f_measure == 100.0);
  }
  SUBCASE("symmetric miss") {
    const Metrics m = compute_metrics(9, 10, 10);
    CHECK(m.precision == doctest::Approx(90.0));
    CHECK(m.recall == doctest::Approx(90.0));
    CHECK(m.f_measure == doctest::Approx(90.0));
  }
  SUBCASE("zero denominators flag the result") {
    const Metrics none = compute_metrics(0, 0, 4);
    CHECK(none.degenerate);
    CHECK(none.precision == 0.0);
    CHECK(none.f_measure == 0.0);
    const Metrics blank = compute_metrics(0, 3, 0);
    CHECK(blank.degenerate);
    CHECK(blank.recall == 0.0);
  }
}

TEST_CASE("trimming shrinks predictions to ground-truth ink") {
  const GroundTruth gt = make_gt({{8, 23}, {40, 55}});

  SUBCASE("padding is removed") {
    const auto trimmed = trim_to_ink_rows(make_result({{0, 31}}), gt);
    REQUIRE(trimmed.lines.size() == 1);
    CHECK(trimmed.lines[0].top_px == 8);
    CHECK(trimmed.lines[0].bottom_px == 23);
  }

  SUBCASE("non overlapping predictions are left alone") {
    const auto trimmed = trim_to_ink_rows(make_result({{26, 38}}), gt);
    REQUIRE(trimmed.lines.size() == 1);
    CHECK(trimmed.lines[0].top_px == 26);
    CHECK(trimmed.lines[0].bottom_px == 38);
  }

  SUBCASE("a span over two lines keeps both ink ends") {
    const auto trimmed = trim_to_ink_rows(make_result({{0, 60}}), gt);
    REQUIRE(trimmed.lines.size() == 1);
    CHECK(trimmed.lines[0].top_px == 8);
    CHECK(trimmed.lines[0].bottom_px == 55);
  }
}

TEST_CASE("gap-bisecting boundaries still score perfectly") {
  // Predictions whose extents cover each line plus half the surrounding
  // gaps; trimming recovers the ink spans exactly.
  const GroundTruth gt = make_gt({{16, 31}, {48, 63}, {80, 95}});
  const auto pred = make_result({{0, 39}, {40, 71}, {72, 111}});
  const Metrics m = score_document(pred, gt);
  CHECK(m.precision == 100.0);
  CHECK(m.recall == 100.0);
  CHECK(m.f_measure == 100.0);
  CHECK(m.matched == 3);
}

TEST_CASE("empty predictions are degenerate, not fatal") {
  const Metrics m =
      score_document(make_result({}), make_gt({{0, 15}}));
  CHECK(m.degenerate);
  CHECK(m.matched == 0);
  CHECK(m.f_measure == 0.0);
}

TEST_CASE("bench runs every strategy and survives bad entries") {
  CorpusConfig config;
  const fs::path dir = fs::temp_directory_path() / "dctseg_bench_smoke";
  fs::remove_all(dir);
  config.out_dir = dir.string();
  config.docs_per_tier = 2;
  config.tiers = {1};
  config.base_width_px = 320;
  config.base_height_px = 416;
  config.min_lines = 3;
  config.max_lines = 4;
  config.seed = 11;

  auto entries = generate_corpus(config);
  REQUIRE(entries.size() == 2);

  SUBCASE("report covers three approaches with all runs") {
    const BenchReport report = bench(entries, 3);
    CHECK(report.repetitions == 3);
    CHECK(report.failures.empty());
    REQUIRE(report.tiers.size() == 1);
    CHECK(report.tiers[0].tier == 1);
    REQUIRE(report.tiers[0].approaches.size() == 3);
    for (const ApproachTiming& timing : report.tiers[0].approaches) {
      CHECK(timing.runs == 6);
      CHECK(timing.stage.median_ns > 0.0);
      CHECK(timing.end_to_end.median_ns >= timing.stage.median_ns);
      if (timing.strategy == Strategy::PixelBaseline) {
        CHECK(timing.improvement_stage_pct == 0.0);
        CHECK(timing.improvement_end_to_end_pct == 0.0);
      } else {
        CHECK(timing.improvement_stage_pct > 0.0);
      }
    }
  }

  SUBCASE("a missing file is recorded and the batch continues") {
    entries.push_back({(dir / "missing.jpg").string(),
                       (dir / "missing.gt.txt").string(), 1});
    const BenchReport report = bench(entries, 3);
    REQUIRE(report.failures.size() == 1);
    CHECK(report.failures[0].find("missing.jpg") != std::string::npos);
    REQUIRE(report.tiers.size() == 1);
    CHECK(report.tiers[0].approaches.size() == 3);
  }

  SUBCASE("too few repetitions are rejected") {
    CHECK_THROWS_AS(bench(entries, 2), std::invalid_argument);
  }

  fs::remove_all(dir);
}
