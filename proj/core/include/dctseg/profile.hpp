// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DCTSEG_PROFILE_HPP_
#define DCTSEG_PROFILE_HPP_

#include <cstdint>
#include <vector>

#include "dctseg/types.hpp"

namespace dctseg {

// Vertical projection of DC darkness: one value per block row, zero on
// pure-background rows, growing with ink coverage.
struct DcProfile {
  std::vector<std::int64_t> values;
  // Modal dequantized DC over the whole grid, ties broken toward the
  // larger (lighter) value.
  int dc_background = 0;
};

// A run of block rows carrying text, with the row where its profile peaks.
struct TextRegion {
  int top_block_row = 0;
  int bottom_block_row = 0;
  int peak_block_row = 0;
};

// Candidate boundary between two consecutive regions. The gap span is the
// rows strictly between them and is empty when the regions touch.
struct SeparatorCandidate {
  int above_region = 0;
  int below_region = 0;
  int gap_top_block_row = 0;
  int gap_bottom_block_row = 0;
  int mid_block_row = 0;

  bool gap_empty() const { return gap_top_block_row > gap_bottom_block_row; }
};

// Fraction of the profile maximum a row must exceed to count as text.
inline constexpr double kDefaultTheta = 0.05;
// A valley between two profile peaks splits a run into two regions when
// its minimum is at or below this fraction of the smaller peak.
inline constexpr double kDefaultSplitRatio = 0.5;

DcProfile build_dc_profile(const CoefficientImage& image);

std::vector<TextRegion> detect_text_regions(
    const DcProfile& profile, double theta = kDefaultTheta,
    double split_ratio = kDefaultSplitRatio);

std::vector<SeparatorCandidate> candidate_separators(
    const std::vector<TextRegion>& regions);

}  // namespace dctseg

#endif  // DCTSEG_PROFILE_HPP_
