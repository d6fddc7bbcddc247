// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DCTSEG_CORPUS_HPP_
#define DCTSEG_CORPUS_HPP_

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dctseg/types.hpp"

namespace dctseg {

struct LineSpec {
  std::string text;        // letters and spaces only
  int gap_below_px = 0;    // blank rows between this line's ink and the next
};

struct DocumentSpec {
  int width_px = 0;
  int height_px = 0;
  int scale = 1;           // integer glyph magnification (resolution analog)
  std::vector<LineSpec> lines;
  int quality = 75;
  int left_margin_px = 16;
  int top_margin_px = 16;
};

struct GroundTruth {
  struct Line {
    int ink_top_px = 0;
    int ink_bottom_px = 0;
  };
  std::vector<Line> lines;
};

class PageOverflowError : public std::runtime_error {
 public:
  explicit PageOverflowError(const std::string& what)
      : std::runtime_error(what) {}
};

// Fixed 8x16 glyph cell: rows 0..3 ascender zone, 4..11 x-height zone,
// 12..15 descender zone. Bit 7 of each row byte is the leftmost pixel.
// Space maps to an empty cell; any other non-letter throws.
std::array<std::uint8_t, 16> glyph_bitmap(char c);

// Draws the lines onto a white page (ink value 0) and records each line's
// tight ink extents. A gap_below_px counts blank rows between ink extents,
// so a zero gap makes consecutive extents abut.
std::pair<PixelImage, GroundTruth> render_document(const DocumentSpec& spec);

struct CorpusConfig {
  std::string out_dir;
  int docs_per_tier = 10;
  std::vector<int> tiers = {1, 2, 3};
  // Page geometry at scale 1; multiplied by the tier's scale.
  int base_width_px = 640;
  int base_height_px = 832;
  std::vector<int> gap_choices_px = {0, 4, 8, 16, 24};
  int min_lines = 4;
  int max_lines = 8;
  int quality = 75;
  std::uint64_t seed = 1;
  // Forces one inter-line gap per document to zero.
  bool force_zero_gap = false;
};

struct ManifestEntry {
  std::string jpeg_path;
  std::string gt_path;
  int tier = 1;
};

// Writes JPEG + ground-truth sidecar pairs plus a manifest file and
// returns the manifest contents. Identical configs produce byte-identical
// corpora.
std::vector<ManifestEntry> generate_corpus(const CorpusConfig& config);

// Builds the same documents generate_corpus would write for one tier,
// without touching the filesystem.
std::vector<DocumentSpec> plan_documents(const CorpusConfig& config,
                                         int tier);

GroundTruth read_ground_truth(const std::string& path);
void write_ground_truth(const std::string& path, const GroundTruth& gt);

std::vector<ManifestEntry> read_manifest(const std::string& path);

}  // namespace dctseg

#endif  // DCTSEG_CORPUS_HPP_
