// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DCTSEG_TYPES_HPP_
#define DCTSEG_TYPES_HPP_

#include <array>
#include <cstdint>
#include <vector>

namespace dctseg {

// One 8x8 block of quantized DCT coefficients in natural (row-major
// frequency) order: index v*8+u holds F(v,u), so coef[0] is DC, coef[8]
// is the first vertical AC frequency and coef[9] its diagonal neighbour.
struct QuantizedBlock {
  std::array<std::int16_t, 64> coef{};
};

// Quantization table in natural order. Entries are 16-bit because
// baseline streams may carry Pq=1 tables.
struct QuantTable {
  std::array<std::uint16_t, 64> q{};
};

// Grayscale raster, row-major, one byte per sample.
struct PixelImage {
  int width_px = 0;
  int height_px = 0;
  std::vector<std::uint8_t> samples;

  std::uint8_t at(int x, int y) const {
    return samples[static_cast<std::size_t>(y) * width_px + x];
  }
  std::uint8_t& at(int x, int y) {
    return samples[static_cast<std::size_t>(y) * width_px + x];
  }
};

// Quantized coefficient grid for one image component, padded out to whole
// blocks. Coefficients stay quantized; callers dequantize on demand with
// the attached table.
struct CoefficientImage {
  int width_px = 0;
  int height_px = 0;
  int blocks_wide = 0;
  int blocks_high = 0;
  std::vector<QuantizedBlock> blocks;
  QuantTable quant_table;
  // Component id from the frame header (1 for streams we encode).
  int source_component = 1;

  const QuantizedBlock& block(int row, int col) const {
    return blocks[static_cast<std::size_t>(row) * blocks_wide + col];
  }
  QuantizedBlock& block(int row, int col) {
    return blocks[static_cast<std::size_t>(row) * blocks_wide + col];
  }
};

}  // namespace dctseg

#endif  // DCTSEG_TYPES_HPP_
