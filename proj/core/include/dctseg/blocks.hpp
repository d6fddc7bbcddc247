// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DCTSEG_BLOCKS_HPP_
#define DCTSEG_BLOCKS_HPP_

#include <array>
#include <cstdint>

#include "dctseg/types.hpp"

namespace dctseg {

// Dequantized coefficients for one block, natural order. 32-bit because a
// 16-bit coefficient times a 16-bit quantizer overflows int16.
struct DctBlock {
  std::array<std::int32_t, 64> coef{};

  std::int32_t dc() const { return coef[0]; }
  // First vertical frequency F(1,0): negative when ink sits in the top
  // half of the block, positive when it sits in the bottom half.
  std::int32_t f10() const { return coef[8]; }
  std::int32_t f11() const { return coef[9]; }
};

// Spatial-domain samples for one block, row-major.
struct PixelBlock {
  std::array<std::uint8_t, 64> samples{};

  std::uint8_t at(int x, int y) const { return samples[y * 8 + x]; }
};

enum class BlockCategory {
  Empty,      // no appreciable AC energy
  TopInk,     // ink confined to the upper part of the block
  BottomInk,  // ink confined to the lower part of the block
  FullInk,    // ink crossing the horizontal midline
  Interior,   // AC energy present but F10 and F11 both silent
};

struct ClassifierParams {
  // Blocks whose summed squared AC energy is at or below this are Empty.
  std::int64_t ac_energy_threshold = 0;
  // |F10| (and |F11|) must exceed this to count as a directional vote.
  std::int32_t f10_dead_zone = 0;
  // Flips the TopInk/BottomInk decision for streams produced by encoders
  // with the opposite DCT sign convention.
  bool invert_f10_sign = false;

  // Threshold tuned to the table's coarseness: twice the finest step,
  // squared, so single-step quantization ripple never reads as ink.
  static ClassifierParams for_table(const QuantTable& table);
};

DctBlock dequantize(const QuantizedBlock& block, const QuantTable& table);

// Inverse 8x8 DCT with level shift and clamping to [0, 255]. Every call
// bumps the process-wide invocation counter.
PixelBlock idct_8x8(const DctBlock& block);

BlockCategory classify_block(const DctBlock& block,
                             const ClassifierParams& params);

// Process-wide count of idct_8x8 calls since start or last reset. Used to
// audit how much inverse-transform work a code path actually performs.
std::uint64_t idct_invocation_count();
void reset_idct_invocation_count();

}  // namespace dctseg

#endif  // DCTSEG_BLOCKS_HPP_
