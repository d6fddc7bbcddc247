// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DCTSEG_PGM_HPP_
#define DCTSEG_PGM_HPP_

#include <string>

#include "dctseg/types.hpp"

namespace dctseg {

// Binary (P5) PGM, maxval 255. Both throw std::runtime_error with the
// path in the message on I/O or format problems.
void write_pgm(const std::string& path, const PixelImage& image);
PixelImage read_pgm(const std::string& path);

}  // namespace dctseg

#endif  // DCTSEG_PGM_HPP_
