// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#include "dctseg/segmenter.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dctseg/codec.hpp"

namespace dctseg {
namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ns_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() -
                                                              start)
      .count();
}

// Picks the candidate row closest to target; earlier row wins exact ties.
struct RowPicker {
  int target;
  int best_row = -1;

  void offer(int row) {
    if (best_row < 0 ||
        std::abs(row - target) < std::abs(best_row - target)) {
      best_row = row;
    }
  }
};

std::vector<TextLine> assemble_lines(const std::vector<TextRegion>& regions,
                                     const std::vector<int>& boundaries,
                                     int height_px, Strategy strategy,
                                     BoundaryPrecision precision) {
  std::vector<TextLine> lines;
  if (regions.empty()) return lines;
  lines.reserve(regions.size());
  int top = regions.front().top_block_row * 8;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    int bottom;
    if (i + 1 < regions.size()) {
      bottom = boundaries[i];
    } else {
      bottom = regions.back().bottom_block_row * 8 + 7;
    }
    bottom = std::min(bottom, height_px - 1);
    top = std::clamp(top, 0, height_px - 1);
    TextLine line;
    line.top_px = top;
    line.bottom_px = std::max(bottom, top);
    line.precision = precision;
    line.strategy = strategy;
    lines.push_back(line);
    top = line.bottom_px + 1;
  }
  return lines;
}

}  // namespace

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::PartialDecompression: return "partial";
    case Strategy::AcCoefficients: return "ac";
    case Strategy::PixelBaseline: return "pixel";
  }
  return "unknown";
}

const char* to_string(BoundaryPrecision precision) {
  return precision == BoundaryPrecision::Pixel ? "pixel" : "block";
}

int refine_partial_decompression(const CoefficientImage& image,
                                 const std::vector<TextRegion>& regions,
                                 const SeparatorCandidate& cand) {
  const TextRegion& above = regions[cand.above_region];
  const TextRegion& below = regions[cand.below_region];
  const int band_top = above.peak_block_row + 1;
  const int band_bottom = below.peak_block_row - 1;
  if (band_top > band_bottom) throw DegenerateBandError();

  const int row_top_px = band_top * 8;
  const int row_bottom_px =
      std::min(band_bottom * 8 + 7, image.height_px - 1);
  const int rows = row_bottom_px - row_top_px + 1;
  std::vector<int> ink(rows, 0);

  for (int br = band_top; br <= band_bottom; ++br) {
    for (int bc = 0; bc < image.blocks_wide; ++bc) {
      const PixelBlock pixels =
          idct_8x8(dequantize(image.block(br, bc), image.quant_table));
      const int y_limit = std::min(8, image.height_px - br * 8);
      const int x_limit = std::min(8, image.width_px - bc * 8);
      for (int y = 0; y < y_limit; ++y) {
        int count = 0;
        for (int x = 0; x < x_limit; ++x) {
          if (pixels.at(x, y) < 128) ++count;
        }
        ink[br * 8 + y - row_top_px] += count;
      }
    }
  }

  const int target = cand.mid_block_row * 8 + 4;

  // Widest run of ink-free rows; its midpoint is the boundary. Ties go to
  // the run whose midpoint lies nearest the expected separator.
  RowPicker zero_pick{target};
  int best_len = 0;
  int r = 0;
  while (r < rows) {
    if (ink[r] == 0) {
      int end = r;
      while (end + 1 < rows && ink[end + 1] == 0) ++end;
      const int len = end - r + 1;
      const int mid = row_top_px + (r + end) / 2;
      if (len > best_len) {
        best_len = len;
        zero_pick.best_row = mid;
      } else if (len == best_len) {
        zero_pick.offer(mid);
      }
      r = end + 1;
    } else {
      ++r;
    }
  }
  if (best_len > 0) return zero_pick.best_row;

  // Touching lines: fall back to the least-inked row.
  int min_ink = ink[0];
  for (int i = 1; i < rows; ++i) min_ink = std::min(min_ink, ink[i]);
  RowPicker min_pick{target};
  for (int i = 0; i < rows; ++i) {
    if (ink[i] == min_ink) min_pick.offer(row_top_px + i);
  }
  return min_pick.best_row;
}

AcBoundary refine_ac(const CoefficientImage& image,
                     const std::vector<TextRegion>& regions,
                     const SeparatorCandidate& cand,
                     const ClassifierParams& params) {
  const TextRegion& above = regions[cand.above_region];
  const TextRegion& below = regions[cand.below_region];
  AcBoundary boundary;
  boundary.above_bottom_block_row = above.bottom_block_row;
  boundary.below_top_block_row = below.top_block_row;

  int above_max = -1;
  int below_min = -1;
  for (int r = cand.gap_top_block_row; r <= cand.gap_bottom_block_row; ++r) {
    for (int c = 0; c < image.blocks_wide; ++c) {
      const DctBlock block = dequantize(image.block(r, c), image.quant_table);
      const BlockCategory category = classify_block(block, params);
      bool to_above = false;
      bool to_below = false;
      switch (category) {
        case BlockCategory::Empty:
          break;
        case BlockCategory::TopInk:
          to_above = true;
          break;
        case BlockCategory::BottomInk:
          to_below = true;
          break;
        case BlockCategory::FullInk:
        case BlockCategory::Interior:
          (r <= cand.mid_block_row ? to_above : to_below) = true;
          break;
      }
      if (to_above) above_max = std::max(above_max, r);
      if (to_below) below_min = below_min < 0 ? r : std::min(below_min, r);
    }
  }
  if (above_max >= 0) boundary.above_bottom_block_row = above_max;
  if (below_min >= 0) boundary.below_top_block_row = below_min;
  if (boundary.below_top_block_row <= boundary.above_bottom_block_row) {
    boundary.below_top_block_row = boundary.above_bottom_block_row + 1;
  }
  return boundary;
}

SegmentationResult segment(const CoefficientImage& image, Strategy strategy,
                           const SegmentParams& params) {
  if (strategy == Strategy::PixelBaseline) {
    return baseline_pixel_segment(image, params.theta);
  }

  SegmentationResult result;
  result.width_px = image.width_px;
  result.height_px = image.height_px;
  result.strategy = strategy;

  const std::uint64_t idct_before = idct_invocation_count();
  const Clock::time_point start = Clock::now();

  const DcProfile profile = build_dc_profile(image);
  const std::vector<TextRegion> regions =
      detect_text_regions(profile, params.theta, params.split_ratio);
  const std::vector<SeparatorCandidate> candidates =
      candidate_separators(regions);

  if (strategy == Strategy::PartialDecompression) {
    std::vector<int> boundaries;
    boundaries.reserve(candidates.size());
    for (const SeparatorCandidate& cand : candidates) {
      int boundary;
      try {
        boundary = refine_partial_decompression(image, regions, cand);
      } catch (const DegenerateBandError&) {
        boundary = regions[cand.below_region].top_block_row * 8 - 1;
      }
      boundaries.push_back(boundary);
    }
    result.lines = assemble_lines(regions, boundaries, image.height_px,
                                  strategy, BoundaryPrecision::Pixel);
  } else {
    const ClassifierParams classifier =
        params.classifier.value_or(ClassifierParams::for_table(
            image.quant_table));
    std::vector<TextLine> lines;
    if (!regions.empty()) {
      lines.resize(regions.size());
      lines.front().top_px = regions.front().top_block_row * 8;
      lines.back().bottom_px = regions.back().bottom_block_row * 8 + 7;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        const AcBoundary boundary =
            refine_ac(image, regions, candidates[i], classifier);
        lines[i].bottom_px = boundary.above_bottom_block_row * 8 + 7;
        lines[i + 1].top_px = boundary.below_top_block_row * 8;
      }
      for (std::size_t i = 0; i < lines.size(); ++i) {
        TextLine& line = lines[i];
        line.precision = BoundaryPrecision::Block;
        line.strategy = strategy;
        line.top_px = std::clamp(line.top_px, 0, image.height_px - 1);
        line.bottom_px =
            std::clamp(line.bottom_px, line.top_px, image.height_px - 1);
        if (i > 0 && line.top_px <= lines[i - 1].bottom_px) {
          line.top_px = std::min(lines[i - 1].bottom_px + 1,
                                 image.height_px - 1);
          line.bottom_px = std::max(line.bottom_px, line.top_px);
        }
      }
    }
    result.lines = std::move(lines);
  }

  result.stage_ns = ns_since(start);
  result.idct_blocks = idct_invocation_count() - idct_before;
  return result;
}

SegmentationResult baseline_pixel_segment(const CoefficientImage& image,
                                          double theta) {
  SegmentationResult result;
  result.width_px = image.width_px;
  result.height_px = image.height_px;
  result.strategy = Strategy::PixelBaseline;

  const std::uint64_t idct_before = idct_invocation_count();
  const Clock::time_point start = Clock::now();

  const PixelImage pixels = decode_pixels(image);
  std::vector<int> ink(pixels.height_px, 0);
  for (int y = 0; y < pixels.height_px; ++y) {
    int count = 0;
    for (int x = 0; x < pixels.width_px; ++x) {
      if (pixels.at(x, y) < 128) ++count;
    }
    ink[y] = count;
  }
  const int max_ink =
      ink.empty() ? 0 : *std::max_element(ink.begin(), ink.end());
  if (max_ink > 0) {
    const double threshold = theta * static_cast<double>(max_ink);
    int y = 0;
    while (y < pixels.height_px) {
      if (static_cast<double>(ink[y]) > threshold) {
        int end = y;
        while (end + 1 < pixels.height_px &&
               static_cast<double>(ink[end + 1]) > threshold) {
          ++end;
        }
        TextLine line;
        line.top_px = y;
        line.bottom_px = end;
        line.precision = BoundaryPrecision::Pixel;
        line.strategy = Strategy::PixelBaseline;
        result.lines.push_back(line);
        y = end + 1;
      } else {
        ++y;
      }
    }
  }

  result.stage_ns = ns_since(start);
  result.idct_blocks = idct_invocation_count() - idct_before;
  return result;
}

}  // namespace dctseg
