// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#include "dctseg/blocks.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace dctseg {
namespace {

std::atomic<std::uint64_t> g_idct_calls{0};

struct CosineTable {
  // basis[u][x] = C(u) * cos((2x+1) u pi / 16)
  double basis[8][8];

  CosineTable() {
    const double pi = std::acos(-1.0);
    for (int u = 0; u < 8; ++u) {
      const double cu = (u == 0) ? 1.0 / std::sqrt(2.0) : 1.0;
      for (int x = 0; x < 8; ++x) {
        basis[u][x] = cu * std::cos((2 * x + 1) * u * pi / 16.0);
      }
    }
  }
};

const CosineTable& cosines() {
  static const CosineTable table;
  return table;
}

}  // namespace

ClassifierParams ClassifierParams::for_table(const QuantTable& table) {
  std::uint16_t min_q = table.q[0];
  for (int i = 1; i < 64; ++i) {
    if (table.q[i] < min_q) min_q = table.q[i];
  }
  ClassifierParams params;
  const std::int64_t step = 2 * static_cast<std::int64_t>(min_q);
  params.ac_energy_threshold = step * step;
  params.f10_dead_zone = 0;
  return params;
}

DctBlock dequantize(const QuantizedBlock& block, const QuantTable& table) {
  DctBlock out;
  for (int i = 0; i < 64; ++i) {
    out.coef[i] = static_cast<std::int32_t>(block.coef[i]) *
                  static_cast<std::int32_t>(table.q[i]);
  }
  return out;
}

PixelBlock idct_8x8(const DctBlock& block) {
  g_idct_calls.fetch_add(1, std::memory_order_relaxed);
  const CosineTable& ct = cosines();

  // Separable: rows first (over u for each v), then columns (over v).
  double tmp[8][8];
  for (int v = 0; v < 8; ++v) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int u = 0; u < 8; ++u) {
        acc += block.coef[v * 8 + u] * ct.basis[u][x];
      }
      tmp[v][x] = acc;
    }
  }

  PixelBlock out;
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int v = 0; v < 8; ++v) {
        acc += tmp[v][x] * ct.basis[v][y];
      }
      long val = std::lround(acc / 4.0) + 128;
      if (val < 0) val = 0;
      if (val > 255) val = 255;
      out.samples[y * 8 + x] = static_cast<std::uint8_t>(val);
    }
  }
  return out;
}

BlockCategory classify_block(const DctBlock& block,
                             const ClassifierParams& params) {
  std::int64_t energy = 0;
  for (int i = 1; i < 64; ++i) {
    const std::int64_t c = block.coef[i];
    energy += c * c;
    if (energy > params.ac_energy_threshold) break;
  }
  if (energy <= params.ac_energy_threshold) return BlockCategory::Empty;

  std::int32_t f10 = block.coef[8];
  if (params.invert_f10_sign) f10 = -f10;
  if (std::abs(f10) > params.f10_dead_zone) {
    return f10 < 0 ? BlockCategory::TopInk : BlockCategory::BottomInk;
  }
  if (std::abs(block.coef[9]) > params.f10_dead_zone) {
    return BlockCategory::FullInk;
  }
  return BlockCategory::Interior;
}

std::uint64_t idct_invocation_count() {
  return g_idct_calls.load(std::memory_order_relaxed);
}

void reset_idct_invocation_count() {
  g_idct_calls.store(0, std::memory_order_relaxed);
}

}  // namespace dctseg
