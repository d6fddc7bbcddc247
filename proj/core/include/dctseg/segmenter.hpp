// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DCTSEG_SEGMENTER_HPP_
#define DCTSEG_SEGMENTER_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dctseg/blocks.hpp"
#include "dctseg/profile.hpp"
#include "dctseg/types.hpp"

namespace dctseg {

enum class Strategy {
  PartialDecompression,  // decompress only the gap bands, pixel-exact
  AcCoefficients,        // F10/F11 sign tests, block-exact, no transforms
  PixelBaseline,         // decompress everything, then project
};

enum class BoundaryPrecision { Pixel, Block };

struct TextLine {
  int top_px = 0;
  int bottom_px = 0;
  BoundaryPrecision precision = BoundaryPrecision::Pixel;
  Strategy strategy = Strategy::PartialDecompression;
};

struct SegmentationResult {
  std::vector<TextLine> lines;
  int width_px = 0;
  int height_px = 0;
  Strategy strategy = Strategy::PartialDecompression;
  // Wall time of the analysis stage alone; parsing and file I/O excluded.
  // The pixel baseline includes its full decompression here, since that
  // is the cost the baseline exists to expose.
  std::int64_t stage_ns = 0;
  // Inverse transforms performed during this call.
  std::uint64_t idct_blocks = 0;
};

struct SegmentParams {
  double theta = kDefaultTheta;
  double split_ratio = kDefaultSplitRatio;
  // Classifier settings for the AC strategy; derived from the image's
  // quant table when not set.
  std::optional<ClassifierParams> classifier;
};

// Raised when a separator candidate has no block rows strictly between
// the two region peaks, so there is nothing to decompress.
class DegenerateBandError : public std::runtime_error {
 public:
  DegenerateBandError() : std::runtime_error("empty refinement band") {}
};

// Strategy A: decompress only the block rows between the two peaks and
// return the boundary pixel row found by ink projection inside that band.
int refine_partial_decompression(const CoefficientImage& image,
                                 const std::vector<TextRegion>& regions,
                                 const SeparatorCandidate& cand);

// Strategy B result: the above line's last block row and the below line's
// first block row, after gap blocks are assigned by their category.
struct AcBoundary {
  int above_bottom_block_row = 0;
  int below_top_block_row = 0;
};

AcBoundary refine_ac(const CoefficientImage& image,
                     const std::vector<TextRegion>& regions,
                     const SeparatorCandidate& cand,
                     const ClassifierParams& params);

SegmentationResult segment(const CoefficientImage& image, Strategy strategy,
                           const SegmentParams& params = {});

// Full-decompression reference: binarize the whole page and take maximal
// runs of inked pixel rows as lines.
SegmentationResult baseline_pixel_segment(const CoefficientImage& image,
                                          double theta = kDefaultTheta);

const char* to_string(Strategy strategy);
const char* to_string(BoundaryPrecision precision);

}  // namespace dctseg

#endif  // DCTSEG_SEGMENTER_HPP_
