// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force 64-term DCT evaluation in double precision. Deliberately
// slow and literal: these are the oracles the fast paths are judged
// against, so they must stay obviously correct.

#ifndef DCTSEG_TESTS_REFERENCE_DCT_HPP_
#define DCTSEG_TESTS_REFERENCE_DCT_HPP_

#include <array>
#include <cmath>
#include <cstdint>

namespace dctseg::testing {

inline double basis_c(int k) {
  return k == 0 ? 1.0 / std::sqrt(2.0) : 1.0;
}

inline double basis_cos(int spatial, int freq) {
  const double pi = std::acos(-1.0);
  return std::cos((2 * spatial + 1) * freq * pi / 16.0);
}

// Forward transform of level-shifted samples; result index v*8+u = F(v,u).
inline std::array<double, 64> reference_fdct(
    const std::array<double, 64>& spatial) {
  std::array<double, 64> out{};
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
          acc += spatial[y * 8 + x] * basis_cos(x, u) * basis_cos(y, v);
        }
      }
      out[v * 8 + u] = 0.25 * basis_c(u) * basis_c(v) * acc;
    }
  }
  return out;
}

// Inverse transform without level shift or clamping.
inline std::array<double, 64> reference_idct(
    const std::array<std::int32_t, 64>& coef) {
  std::array<double, 64> out{};
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int v = 0; v < 8; ++v) {
        for (int u = 0; u < 8; ++u) {
          acc += basis_c(u) * basis_c(v) * coef[v * 8 + u] * basis_cos(x, u) *
                 basis_cos(y, v);
        }
      }
      out[y * 8 + x] = 0.25 * acc;
    }
  }
  return out;
}

// Level-shifts 8-bit samples and runs the forward oracle.
inline std::array<double, 64> reference_fdct_of_pixels(
    const std::array<std::uint8_t, 64>& samples) {
  std::array<double, 64> shifted{};
  for (int i = 0; i < 64; ++i) {
    shifted[i] = static_cast<double>(samples[i]) - 128.0;
  }
  return reference_fdct(shifted);
}

// The reference pixel reconstruction: inverse oracle, round, shift, clamp.
inline std::array<std::uint8_t, 64> reference_pixels(
    const std::array<std::int32_t, 64>& coef) {
  const std::array<double, 64> raw = reference_idct(coef);
  std::array<std::uint8_t, 64> out{};
  for (int i = 0; i < 64; ++i) {
    long v = std::lround(raw[i]) + 128;
    if (v < 0) v = 0;
    if (v > 255) v = 255;
    out[i] = static_cast<std::uint8_t>(v);
  }
  return out;
}

}  // namespace dctseg::testing

#endif  // DCTSEG_TESTS_REFERENCE_DCT_HPP_
