// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks over in-memory pages; tier N scales a 640x832 page by N.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "dctseg/blocks.hpp"
#include "dctseg/codec.hpp"
#include "dctseg/corpus.hpp"
#include "dctseg/profile.hpp"
#include "dctseg/segmenter.hpp"

namespace {

dctseg::DocumentSpec page_spec(int tier) {
  dctseg::DocumentSpec spec;
  spec.scale = tier;
  spec.width_px = 640 * tier;
  spec.height_px = 832 * tier;
  spec.left_margin_px = 16 * tier;
  spec.top_margin_px = 16 * tier;
  spec.lines = {{"benchmark fixture words", 8 * tier},
                {"with a steady mixture", 16 * tier},
                {"of ascending letters", 24 * tier},
                {"and descending glyphs", 16 * tier},
                {"across every tier", 8 * tier},
                {"of the page", 0}};
  return spec;
}

const dctseg::PixelImage& page_pixels(int tier) {
  static std::vector<dctseg::PixelImage> cache(4);
  dctseg::PixelImage& slot = cache.at(std::size_t(tier));
  if (slot.samples.empty()) {
    slot = dctseg::render_document(page_spec(tier)).first;
  }
  return slot;
}

const std::vector<std::uint8_t>& page_bytes(int tier) {
  static std::vector<std::vector<std::uint8_t>> cache(4);
  std::vector<std::uint8_t>& slot = cache.at(std::size_t(tier));
  if (slot.empty()) {
    slot = dctseg::encode_jpeg_grayscale(page_pixels(tier), 75);
  }
  return slot;
}

const dctseg::CoefficientImage& page_image(int tier) {
  static std::vector<dctseg::CoefficientImage> cache(4);
  dctseg::CoefficientImage& slot = cache.at(std::size_t(tier));
  if (slot.blocks.empty()) {
    slot = dctseg::parse_jpeg(page_bytes(tier));
  }
  return slot;
}

void BM_EncodeJpeg(benchmark::State& state) {
  const dctseg::PixelImage& page = page_pixels(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dctseg::encode_jpeg_grayscale(page, 75));
  }
}
BENCHMARK(BM_EncodeJpeg)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ParseJpeg(benchmark::State& state) {
  const auto& bytes = page_bytes(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dctseg::parse_jpeg(bytes));
  }
}
BENCHMARK(BM_ParseJpeg)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_DecodePixels(benchmark::State& state) {
  const auto& image = page_image(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dctseg::decode_pixels(image));
  }
}
BENCHMARK(BM_DecodePixels)
    ->Arg(1)
    ->Arg(2)
    ->Arg(3)
    ->Unit(benchmark::kMillisecond);

void BM_BuildDcProfile(benchmark::State& state) {
  const auto& image = page_image(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dctseg::build_dc_profile(image));
  }
}
BENCHMARK(BM_BuildDcProfile)
    ->Arg(1)
    ->Arg(2)
    ->Arg(3)
    ->Unit(benchmark::kMicrosecond);

void BM_SegmentPartial(benchmark::State& state) {
  const auto& image = page_image(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dctseg::segment(image, dctseg::Strategy::PartialDecompression));
  }
}
BENCHMARK(BM_SegmentPartial)
    ->Arg(1)
    ->Arg(2)
    ->Arg(3)
    ->Unit(benchmark::kMicrosecond);

void BM_SegmentAc(benchmark::State& state) {
  const auto& image = page_image(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dctseg::segment(image, dctseg::Strategy::AcCoefficients));
  }
}
BENCHMARK(BM_SegmentAc)
    ->Arg(1)
    ->Arg(2)
    ->Arg(3)
    ->Unit(benchmark::kMicrosecond);

void BM_SegmentPixelBaseline(benchmark::State& state) {
  const auto& image = page_image(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dctseg::segment(image, dctseg::Strategy::PixelBaseline));
  }
}
BENCHMARK(BM_SegmentPixelBaseline)
    ->Arg(1)
    ->Arg(2)
    ->Arg(3)
    ->Unit(benchmark::kMillisecond);

void BM_Idct8x8(benchmark::State& state) {
  const auto& image = page_image(1);
  const dctseg::DctBlock block =
      dctseg::dequantize(image.block(2, 2), image.quant_table);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dctseg::idct_8x8(block));
  }
}
BENCHMARK(BM_Idct8x8);

}  // namespace

BENCHMARK_MAIN();
