// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DCTSEG_CODEC_HPP_
#define DCTSEG_CODEC_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dctseg/types.hpp"

namespace dctseg {

enum class JpegErrorKind {
  UnsupportedMode,   // well-formed but not baseline sequential Huffman
  TruncatedStream,   // input ended before the syntax element it promised
  BadMarker,         // marker sequence or segment length is inconsistent
  BadHuffman,        // undecodable entropy data or invalid table
  ResourceLimit,     // stream demands more memory than the caller allows
};

class JpegError : public std::runtime_error {
 public:
  JpegError(JpegErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  JpegErrorKind kind() const { return kind_; }

 private:
  JpegErrorKind kind_;
};

class InvalidQualityError : public std::invalid_argument {
 public:
  explicit InvalidQualityError(const std::string& what)
      : std::invalid_argument(what) {}
};

struct ParseOptions {
  // Upper bound on coefficient storage the parser may allocate. The frame
  // header is checked against this before any grid is allocated.
  std::size_t max_coefficient_bytes = std::size_t{1} << 30;
};

struct EncodeOptions {
  // Restart interval in MCUs; 0 disables restart markers.
  int restart_interval_mcus = 0;
};

// Decodes a baseline JPEG and returns the quantized luminance coefficient
// grid. Chroma components are entropy-decoded and discarded. Throws
// JpegError on malformed or unsupported input.
CoefficientImage parse_jpeg(std::span<const std::uint8_t> data,
                            const ParseOptions& options = {});

// Forward path up to (and including) quantization, exposed so tests can
// compare coefficient grids bit for bit against a parsed stream.
// quality follows the common 1..100 convention. Throws
// InvalidQualityError outside that range.
CoefficientImage encode_coefficients(const PixelImage& image, int quality);

// Serializes a coefficient grid as a single-component baseline JPEG.
std::vector<std::uint8_t> serialize_jpeg(const CoefficientImage& image,
                                         const EncodeOptions& options = {});

// Convenience composition of encode_coefficients and serialize_jpeg.
std::vector<std::uint8_t> encode_jpeg_grayscale(
    const PixelImage& image, int quality, const EncodeOptions& options = {});

// Full decompression of a coefficient grid to pixels, cropped to the
// declared image size.
PixelImage decode_pixels(const CoefficientImage& image);

const char* to_string(JpegErrorKind kind);

}  // namespace dctseg

#endif  // DCTSEG_CODEC_HPP_
