// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dctseg/blocks.hpp"
#include "support/reference_dct.hpp"

using namespace dctseg;
namespace ref = dctseg::testing;

namespace {

DctBlock block_from(std::initializer_list<std::pair<int, std::int32_t>> vals) {
  DctBlock b;
  for (auto [index, value] : vals) b.coef[index] = value;
  return b;
}

// The block the top-ink analysis is built around: upper four pixel rows
// black, lower four white.
std::array<std::uint8_t, 64> top_half_black() {
  std::array<std::uint8_t, 64> px{};
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) px[y * 8 + x] = y < 4 ? 0 : 255;
  }
  return px;
}

std::array<std::uint8_t, 64> mirror_vertical(
    const std::array<std::uint8_t, 64>& px) {
  std::array<std::uint8_t, 64> out{};
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) out[y * 8 + x] = px[(7 - y) * 8 + x];
  }
  return out;
}

ClassifierParams loose_params() {
  ClassifierParams p;
  p.ac_energy_threshold = 1;
  p.f10_dead_zone = 0;
  return p;
}

}  // namespace

TEST_CASE("dequantize multiplies elementwise") {
  QuantizedBlock qb;
  QuantTable qt;
  for (int i = 0; i < 64; ++i) qt.q[i] = 1;

  SUBCASE("all-zero block stays zero") {
    const DctBlock d = dequantize(qb, qt);
    for (int i = 0; i < 64; ++i) CHECK(d.coef[i] == 0);
  }

  SUBCASE("dc 63 times step 16 gives 1008") {
    qb.coef[0] = 63;
    qt.q[0] = 16;
    CHECK(dequantize(qb, qt).dc() == 1008);
  }

  SUBCASE("random block matches a scalar loop") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      for (int i = 0; i < 64; ++i) {
        qb.coef[i] = static_cast<std::int16_t>(rng() % 2047) - 1023;
        qt.q[i] = static_cast<std::uint16_t>(1 + rng() % 255);
      }
      const DctBlock d = dequantize(qb, qt);
      for (int i = 0; i < 64; ++i) {
        CHECK(d.coef[i] == std::int32_t(qb.coef[i]) * std::int32_t(qt.q[i]));
      }
    }
  }
}

TEST_CASE("idct_8x8 reference behavior") {
  SUBCASE("zero block decodes to flat 128") {
    const PixelBlock px = idct_8x8(DctBlock{});
    for (int i = 0; i < 64; ++i) CHECK(px.samples[i] == 128);
  }

  SUBCASE("pure DC 1016 saturates to 255") {
    const PixelBlock px = idct_8x8(block_from({{0, 1016}}));
    for (int i = 0; i < 64; ++i) CHECK(px.samples[i] == 255);
  }

  SUBCASE("negative F10 makes the top darker, monotone in y") {
    const PixelBlock px = idct_8x8(block_from({{0, -4}, {8, -924}}));
    for (int x = 0; x < 8; ++x) {
      for (int y = 0; y + 1 < 8; ++y) {
        CHECK(px.at(x, y) <= px.at(x, y + 1));
      }
      CHECK(px.at(x, 0) < px.at(x, 7));
    }
  }

  SUBCASE("matches the 64-term oracle within one level on random blocks") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
      DctBlock b;
      for (int i = 0; i < 64; ++i) {
        b.coef[i] = static_cast<std::int32_t>(rng() % 401) - 200;
      }
      const PixelBlock fast = idct_8x8(b);
      const auto slow = ref::reference_pixels(b.coef);
      for (int i = 0; i < 64; ++i) {
        CHECK(std::abs(int(fast.samples[i]) - int(slow[i])) <= 1);
      }
    }
  }
}

TEST_CASE("idct invocation counter tracks every call") {
  reset_idct_invocation_count();
  CHECK(idct_invocation_count() == 0);
  (void)idct_8x8(DctBlock{});
  (void)idct_8x8(DctBlock{});
  CHECK(idct_invocation_count() == 2);
  reset_idct_invocation_count();
  CHECK(idct_invocation_count() == 0);
}

TEST_CASE("classify_block category decisions") {
  const ClassifierParams params = loose_params();

  SUBCASE("no AC energy is Empty") {
    CHECK(classify_block(block_from({{0, 500}}), params) ==
          BlockCategory::Empty);
  }

  SUBCASE("top-half-black block is TopInk with F10 near -924") {
    const auto coeffs = ref::reference_fdct_of_pixels(top_half_black());
    CHECK(coeffs[8] == doctest::Approx(-924.25).epsilon(0.001));
    DctBlock b;
    for (int i = 0; i < 64; ++i) {
      b.coef[i] = static_cast<std::int32_t>(std::lround(coeffs[i]));
    }
    CHECK(b.dc() == -4);
    CHECK(classify_block(b, params) == BlockCategory::TopInk);
  }

  SUBCASE("mirrored block is BottomInk with the sign flipped") {
    const auto coeffs =
        ref::reference_fdct_of_pixels(mirror_vertical(top_half_black()));
    CHECK(coeffs[8] == doctest::Approx(924.25).epsilon(0.001));
    DctBlock b;
    for (int i = 0; i < 64; ++i) {
      b.coef[i] = static_cast<std::int32_t>(std::lround(coeffs[i]));
    }
    CHECK(classify_block(b, params) == BlockCategory::BottomInk);
  }

  SUBCASE("silent F10 with loud F11 is FullInk, else Interior") {
    CHECK(classify_block(block_from({{9, 40}}), params) ==
          BlockCategory::FullInk);
    CHECK(classify_block(block_from({{10, 40}}), params) ==
          BlockCategory::Interior);
  }

  SUBCASE("invert_f10_sign swaps the vertical decision") {
    ClassifierParams inverted = params;
    inverted.invert_f10_sign = true;
    const DctBlock b = block_from({{8, -300}});
    CHECK(classify_block(b, params) == BlockCategory::TopInk);
    CHECK(classify_block(b, inverted) == BlockCategory::BottomInk);
  }

  SUBCASE("every random block lands in exactly one category") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 500; ++trial) {
      DctBlock b;
      for (int i = 0; i < 64; ++i) {
        b.coef[i] = static_cast<std::int32_t>(rng() % 2001) - 1000;
      }
      const BlockCategory cat = classify_block(b, params);
      const bool known = cat == BlockCategory::Empty ||
                         cat == BlockCategory::TopInk ||
                         cat == BlockCategory::BottomInk ||
                         cat == BlockCategory::FullInk ||
                         cat == BlockCategory::Interior;
      CHECK(known);
    }
  }
}

TEST_CASE("F10 antisymmetry under vertical mirroring") {
  std::mt19937_64 rng(17);
  const ClassifierParams params = loose_params();
  for (int trial = 0; trial < 200; ++trial) {
    std::array<std::uint8_t, 64> px;
    for (auto& s : px) s = static_cast<std::uint8_t>(rng() % 256);
    const auto f = ref::reference_fdct_of_pixels(px);
    const auto g = ref::reference_fdct_of_pixels(mirror_vertical(px));
    CHECK(std::abs(f[8] + g[8]) < 1e-6);

    DctBlock fb;
    DctBlock gb;
    for (int i = 0; i < 64; ++i) {
      fb.coef[i] = static_cast<std::int32_t>(std::lround(f[i]));
      gb.coef[i] = static_cast<std::int32_t>(std::lround(g[i]));
    }
    if (classify_block(fb, params) == BlockCategory::TopInk &&
        std::abs(f[8]) > 1.0) {
      CHECK(classify_block(gb, params) == BlockCategory::BottomInk);
    }
  }
}

TEST_CASE("quantization preserves the F10 sign") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 300; ++trial) {
    QuantizedBlock qb;
    QuantTable qt;
    for (int i = 0; i < 64; ++i) {
      qb.coef[i] = static_cast<std::int16_t>(rng() % 2001) - 1000;
      qt.q[i] = static_cast<std::uint16_t>(1 + rng() % 255);
    }
    const DctBlock d = dequantize(qb, qt);
    const auto sign = [](std::int32_t v) { return (v > 0) - (v < 0); };
    CHECK(sign(d.f10()) == sign(qb.coef[8]));
    CHECK(sign(d.f11()) == sign(qb.coef[9]));
  }
}

TEST_CASE("for_table derives the energy floor from the finest step") {
  QuantTable qt;
  for (int i = 0; i < 64; ++i) qt.q[i] = 10;
  qt.q[37] = 3;
  const ClassifierParams p = ClassifierParams::for_table(qt);
  CHECK(p.ac_energy_threshold == 36);
  CHECK(p.f10_dead_zone == 0);
  CHECK_FALSE(p.invert_f10_sign);
}
