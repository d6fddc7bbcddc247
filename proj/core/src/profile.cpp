// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#include "dctseg/profile.hpp"

#include <algorithm>
#include <array>

namespace dctseg {
namespace {

// Modal quantized DC. Quantized and dequantized DC are in bijection (the
// quantizer is a fixed positive step), so the mode can be taken on the
// cheaper quantized values and scaled afterwards.
int modal_dc(const CoefficientImage& image) {
  // Quantized DC of an 8-bit baseline stream lives in [-1024, 1023]; a
  // flat array is much faster than a hash map here. Out-of-range values
  // from corrupt streams are clamped into the edge bins.
  static constexpr int kOffset = 2048;
  std::vector<std::uint32_t> counts(4096, 0);
  for (const QuantizedBlock& block : image.blocks) {
    int v = block.coef[0] + kOffset;
    v = std::clamp(v, 0, 4095);
    ++counts[v];
  }
  int best = 0;
  std::uint32_t best_count = 0;
  for (int v = 0; v < 4096; ++v) {
    // >= keeps the larger (lighter) value on ties.
    if (counts[v] >= best_count && counts[v] > 0) {
      best_count = counts[v];
      best = v - kOffset;
    }
  }
  return best * image.quant_table.q[0];
}

struct Peak {
  int row;
  std::int64_t value;
};

// Local maxima of the profile within [first, last], plateau-aware: a
// plateau is a peak when both sides fall away (or hit the run edge). The
// plateau's first row represents it.
std::vector<Peak> local_maxima(const std::vector<std::int64_t>& v, int first,
                               int last) {
  std::vector<Peak> peaks;
  int r = first;
  while (r <= last) {
    int plateau_end = r;
    while (plateau_end < last && v[plateau_end + 1] == v[r]) ++plateau_end;
    const bool rises_left = r == first || v[r - 1] < v[r];
    const bool falls_right = plateau_end == last || v[plateau_end + 1] < v[r];
    if (rises_left && falls_right) peaks.push_back({r, v[r]});
    r = plateau_end + 1;
  }
  return peaks;
}

int argmax_first(const std::vector<std::int64_t>& v, int first, int last) {
  int best = first;
  for (int r = first + 1; r <= last; ++r) {
    if (v[r] > v[best]) best = r;
  }
  return best;
}

int argmin_first(const std::vector<std::int64_t>& v, int first, int last) {
  int best = first;
  for (int r = first + 1; r <= last; ++r) {
    if (v[r] < v[best]) best = r;
  }
  return best;
}

// Splits one above-threshold run into regions. A run usually holds one
// text line, but when two lines touch (zero inter-line spacing) their
// profiles fuse into one run with two peaks and a shallow valley; the run
// is split at the valley so each line still gets its own region.
void split_run(const std::vector<std::int64_t>& v, int first, int last,
               double split_ratio, std::vector<TextRegion>& out) {
  std::vector<Peak> peaks = local_maxima(v, first, last);

  // Merge peak pairs whose valley stays above the ratio: those are
  // texture inside a single line, not a line boundary. The taller peak
  // absorbs the shorter one; the earlier wins ties.
  std::vector<Peak> survivors;
  for (const Peak& peak : peaks) {
    Peak current = peak;
    while (!survivors.empty()) {
      const Peak prev = survivors.back();
      std::int64_t valley = std::min(prev.value, current.value);
      for (int r = prev.row + 1; r < current.row; ++r) {
        valley = std::min(valley, v[r]);
      }
      const double limit = split_ratio * std::min(prev.value, current.value);
      if (static_cast<double>(valley) <= limit) break;
      survivors.pop_back();
      if (current.value <= prev.value) current = prev;
    }
    survivors.push_back(current);
  }

  int start = first;
  for (std::size_t i = 0; i + 1 < survivors.size(); ++i) {
    const int split = argmin_first(v, survivors[i].row, survivors[i + 1].row);
    TextRegion region;
    region.top_block_row = start;
    region.bottom_block_row = split;
    region.peak_block_row = argmax_first(v, start, split);
    out.push_back(region);
    start = split + 1;
  }
  TextRegion region;
  region.top_block_row = start;
  region.bottom_block_row = last;
  region.peak_block_row = argmax_first(v, start, last);
  out.push_back(region);
}

}  // namespace

DcProfile build_dc_profile(const CoefficientImage& image) {
  DcProfile profile;
  profile.values.assign(image.blocks_high, 0);
  profile.dc_background = modal_dc(image);

  const int q0 = image.quant_table.q[0];
  for (int r = 0; r < image.blocks_high; ++r) {
    std::int64_t sum = 0;
    for (int c = 0; c < image.blocks_wide; ++c) {
      const std::int64_t dc =
          static_cast<std::int64_t>(image.block(r, c).coef[0]) * q0;
      if (dc < profile.dc_background) sum += profile.dc_background - dc;
    }
    profile.values[r] = sum;
  }
  return profile;
}

std::vector<TextRegion> detect_text_regions(const DcProfile& profile,
                                            double theta,
                                            double split_ratio) {
  std::vector<TextRegion> regions;
  const auto& v = profile.values;
  if (v.empty()) return regions;

  const std::int64_t max_value = *std::max_element(v.begin(), v.end());
  if (max_value <= 0) return regions;
  const double threshold = theta * static_cast<double>(max_value);

  const int n = static_cast<int>(v.size());
  int r = 0;
  while (r < n) {
    if (static_cast<double>(v[r]) > threshold) {
      int end = r;
      while (end + 1 < n && static_cast<double>(v[end + 1]) > threshold) {
        ++end;
      }
      split_run(v, r, end, split_ratio, regions);
      r = end + 1;
    } else {
      ++r;
    }
  }
  return regions;
}

std::vector<SeparatorCandidate> candidate_separators(
    const std::vector<TextRegion>& regions) {
  std::vector<SeparatorCandidate> candidates;
  if (regions.size() < 2) return candidates;
  candidates.reserve(regions.size() - 1);
  for (std::size_t i = 0; i + 1 < regions.size(); ++i) {
    const TextRegion& above = regions[i];
    const TextRegion& below = regions[i + 1];
    SeparatorCandidate cand;
    cand.above_region = static_cast<int>(i);
    cand.below_region = static_cast<int>(i + 1);
    cand.gap_top_block_row = above.bottom_block_row + 1;
    cand.gap_bottom_block_row = below.top_block_row - 1;
    cand.mid_block_row = (above.peak_block_row + below.peak_block_row) / 2;
    candidates.push_back(cand);
  }
  return candidates;
}

}  // namespace dctseg
