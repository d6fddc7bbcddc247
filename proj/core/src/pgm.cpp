// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#include "dctseg/pgm.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace dctseg {
namespace {

[[noreturn]] void fail(const std::string& path, const char* what) {
  throw std::runtime_error(path + ": " + what);
}

int read_token(std::istream& in, const std::string& path) {
  // Skips whitespace and '#' comment lines, then reads one integer.
  for (;;) {
    const int c = in.peek();
    if (c == EOF) fail(path, "unexpected end of PGM header");
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      continue;
    }
    break;
  }
  int value = 0;
  if (!(in >> value)) fail(path, "malformed PGM header");
  return value;
}

}  // namespace

void write_pgm(const std::string& path, const PixelImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P5\n" << image.width_px << " " << image.height_px << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.samples.data()),
            static_cast<std::streamsize>(image.samples.size()));
  if (!out) fail(path, "write failed");
}

PixelImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5') fail(path, "not a P5 PGM");
  const int width = read_token(in, path);
  const int height = read_token(in, path);
  const int maxval = read_token(in, path);
  if (width < 1 || height < 1 || maxval != 255) {
    fail(path, "unsupported PGM geometry");
  }
  in.get();  // single whitespace after maxval
  PixelImage image;
  image.width_px = width;
  image.height_px = height;
  image.samples.resize(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(image.samples.data()),
          static_cast<std::streamsize>(image.samples.size()));
  if (!in) fail(path, "truncated PGM payload");
  return image;
}

}  // namespace dctseg
