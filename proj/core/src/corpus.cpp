// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#include "dctseg/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dctseg/codec.hpp"

namespace dctseg {
namespace {

// 8x16 cell, bit 7 = leftmost column. Lowercase bodies occupy the
// x-height zone (rows 4..11); b d f h k l t and all capitals reach into
// the ascender zone (rows 0..3); g j p q y reach into the descender zone
// (rows 12..15).
struct FontTable {
  std::array<std::array<std::uint8_t, 16>, 128> glyphs{};

  void set(char c, int first_row, std::initializer_list<int> rows) {
    auto& g = glyphs[static_cast<unsigned char>(c)];
    int r = first_row;
    for (int bits : rows) g[r++] = static_cast<std::uint8_t>(bits);
  }

  FontTable() {
    // x-height-only lowercase
    set('a', 4, {0x70, 0x88, 0x08, 0x78, 0x88, 0x88, 0x98, 0x68});
    set('c', 4, {0x70, 0x88, 0x80, 0x80, 0x80, 0x80, 0x88, 0x70});
    set('e', 4, {0x70, 0x88, 0x88, 0xF8, 0x80, 0x80, 0x88, 0x70});
    set('i', 4, {0x20, 0x00, 0x60, 0x20, 0x20, 0x20, 0x20, 0x70});
    set('m', 4, {0xD0, 0xA8, 0xA8, 0xA8, 0xA8, 0xA8, 0xA8, 0xA8});
    set('n', 4, {0xB0, 0xC8, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88});
    set('o', 4, {0x70, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88, 0x70});
    set('r', 4, {0xB0, 0xC8, 0x80, 0x80, 0x80, 0x80, 0x80, 0x80});
    set('s', 4, {0x70, 0x88, 0x80, 0x70, 0x08, 0x08, 0x88, 0x70});
    set('u', 4, {0x88, 0x88, 0x88, 0x88, 0x88, 0x88, 0x98, 0x68});
    set('v', 4, {0x88, 0x88, 0x88, 0x88, 0x88, 0x50, 0x50, 0x20});
    set('w', 4, {0xA8, 0xA8, 0xA8, 0xA8, 0xA8, 0xA8, 0xA8, 0x50});
    set('x', 4, {0x88, 0x88, 0x50, 0x20, 0x20, 0x50, 0x88, 0x88});
    set('z', 4, {0xF8, 0x08, 0x10, 0x20, 0x20, 0x40, 0x80, 0xF8});
    // ascenders
    set('b', 0, {0x80, 0x80, 0x80, 0x80,
                 0xB0, 0xC8, 0x88, 0x88, 0x88, 0x88, 0xC8, 0xB0});
    set('d', 0, {0x08, 0x08, 0x08, 0x08,
                 0x68, 0x98, 0x88, 0x88, 0x88, 0x88, 0x98, 0x68});
    set('f', 0, {0x30, 0x48, 0x40, 0x40,
                 0xE0, 0x40, 0x40, 0x40, 0x40, 0x40, 0x40, 0x40});
    set('h', 0, {0x80, 0x80, 0x80, 0x80,
                 0xB0, 0xC8, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88});
    set('k', 0, {0x80, 0x80, 0x80, 0x80,
                 0x88, 0x90, 0xA0, 0xC0, 0xA0, 0x90, 0x88, 0x88});
    set('l', 0, {0x40, 0x40, 0x40, 0x40,
                 0x40, 0x40, 0x40, 0x40, 0x40, 0x40, 0x40, 0x60});
    set('t', 0, {0x00, 0x40, 0x40, 0x40,
                 0xE0, 0x40, 0x40, 0x40, 0x40, 0x40, 0x48, 0x30});
    // descenders
    set('g', 4, {0x68, 0x98, 0x88, 0x88, 0x88, 0x98, 0x68, 0x08,
                 0x08, 0x88, 0x88, 0x70});
    set('j', 4, {0x10, 0x00, 0x10, 0x10, 0x10, 0x10, 0x10, 0x10,
                 0x10, 0x10, 0x90, 0x60});
    set('p', 4, {0xB0, 0xC8, 0x88, 0x88, 0x88, 0x88, 0xC8, 0xB0,
                 0x80, 0x80, 0x80, 0x80});
    set('q', 4, {0x68, 0x98, 0x88, 0x88, 0x88, 0x88, 0x98, 0x68,
                 0x08, 0x08, 0x08, 0x08});
    set('y', 4, {0x88, 0x88, 0x88, 0x88, 0x88, 0x88, 0x98, 0x68,
                 0x08, 0x08, 0x10, 0x60});
    // capitals
    set('A', 0, {0x20, 0x50, 0x88, 0x88, 0x88, 0xF8, 0x88, 0x88,
                 0x88, 0x88, 0x88, 0x88});
    set('B', 0, {0xF0, 0x88, 0x88, 0x88, 0xF0, 0x88, 0x88, 0x88,
                 0x88, 0x88, 0x88, 0xF0});
    set('C', 0, {0x70, 0x88, 0x80, 0x80, 0x80, 0x80, 0x80, 0x80,
                 0x80, 0x80, 0x88, 0x70});
    set('D', 0, {0xF0, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88,
                 0x88, 0x88, 0x88, 0xF0});
    set('E', 0, {0xF8, 0x80, 0x80, 0x80, 0xF0, 0x80, 0x80, 0x80,
                 0x80, 0x80, 0x80, 0xF8});
    set('F', 0, {0xF8, 0x80, 0x80, 0x80, 0xF0, 0x80, 0x80, 0x80,
                 0x80, 0x80, 0x80, 0x80});
    set('G', 0, {0x70, 0x88, 0x80, 0x80, 0x80, 0xB8, 0x88, 0x88,
                 0x88, 0x88, 0x88, 0x70});
    set('H', 0, {0x88, 0x88, 0x88, 0x88, 0xF8, 0x88, 0x88, 0x88,
                 0x88, 0x88, 0x88, 0x88});
    set('I', 0, {0x70, 0x20, 0x20, 0x20, 0x20, 0x20, 0x20, 0x20,
                 0x20, 0x20, 0x20, 0x70});
    set('J', 0, {0x38, 0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x10,
                 0x10, 0x90, 0x90, 0x60});
    set('K', 0, {0x88, 0x90, 0xA0, 0xC0, 0xC0, 0xA0, 0x90, 0x88,
                 0x88, 0x88, 0x88, 0x88});
    set('L', 0, {0x80, 0x80, 0x80, 0x80, 0x80, 0x80, 0x80, 0x80,
                 0x80, 0x80, 0x80, 0xF8});
    set('M', 0, {0x88, 0xD8, 0xA8, 0xA8, 0xA8, 0x88, 0x88, 0x88,
                 0x88, 0x88, 0x88, 0x88});
    set('N', 0, {0x88, 0xC8, 0xC8, 0xA8, 0xA8, 0x98, 0x98, 0x88,
                 0x88, 0x88, 0x88, 0x88});
    set('O', 0, {0x70, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88,
                 0x88, 0x88, 0x88, 0x70});
    set('P', 0, {0xF0, 0x88, 0x88, 0x88, 0xF0, 0x80, 0x80, 0x80,
                 0x80, 0x80, 0x80, 0x80});
    set('Q', 0, {0x70, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88,
                 0xA8, 0x90, 0x90, 0x68});
    set('R', 0, {0xF0, 0x88, 0x88, 0x88, 0xF0, 0xA0, 0x90, 0x88,
                 0x88, 0x88, 0x88, 0x88});
    set('S', 0, {0x70, 0x88, 0x80, 0x80, 0x70, 0x08, 0x08, 0x08,
                 0x08, 0x08, 0x88, 0x70});
    set('T', 0, {0xF8, 0x20, 0x20, 0x20, 0x20, 0x20, 0x20, 0x20,
                 0x20, 0x20, 0x20, 0x20});
    set('U', 0, {0x88, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88,
                 0x88, 0x88, 0x88, 0x70});
    set('V', 0, {0x88, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88, 0x88,
                 0x50, 0x50, 0x20, 0x20});
    set('W', 0, {0x88, 0x88, 0x88, 0x88, 0x88, 0x88, 0xA8, 0xA8,
                 0xA8, 0xA8, 0xA8, 0x50});
    set('X', 0, {0x88, 0x88, 0x50, 0x50, 0x20, 0x20, 0x20, 0x50,
                 0x50, 0x88, 0x88, 0x88});
    set('Y', 0, {0x88, 0x88, 0x50, 0x50, 0x20, 0x20, 0x20, 0x20,
                 0x20, 0x20, 0x20, 0x20});
    set('Z', 0, {0xF8, 0x08, 0x08, 0x10, 0x10, 0x20, 0x20, 0x40,
                 0x40, 0x80, 0x80, 0xF8});
  }
};

const FontTable& font() {
  static const FontTable table;
  return table;
}

bool valid_char(char c) {
  return c == ' ' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// First and last inked glyph rows over a whole line of text, or (-1, -1)
// for an all-space line.
std::pair<int, int> line_ink_rows(const std::string& text) {
  int first = -1;
  int last = -1;
  for (char c : text) {
    const auto glyph = glyph_bitmap(c);
    for (int r = 0; r < 16; ++r) {
      if (glyph[r] == 0) continue;
      if (first < 0 || r < first) first = r;
      if (r > last) last = r;
    }
  }
  return {first, last};
}

// Deterministic bounded draw. uniform_int_distribution is not portable
// across standard libraries, and corpora must be byte-identical anywhere.
int bounded(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

std::string random_word(std::mt19937_64& rng) {
  const int length = 3 + bounded(rng, 6);
  std::string word;
  word.reserve(length);
  const bool capitalized = bounded(rng, 5) == 0;
  for (int i = 0; i < length; ++i) {
    char c = static_cast<char>('a' + bounded(rng, 26));
    if (i == 0 && capitalized) c = static_cast<char>(c - 'a' + 'A');
    word.push_back(c);
  }
  return word;
}

std::string random_line(std::mt19937_64& rng, int max_chars) {
  std::string line;
  for (;;) {
    const std::string word = random_word(rng);
    const int needed = static_cast<int>(word.size()) +
                       (line.empty() ? 0 : 1);
    if (static_cast<int>(line.size()) + needed > max_chars) break;
    if (!line.empty()) line.push_back(' ');
    line += word;
  }
  if (line.empty()) line = "a";
  return line;
}

}  // namespace

std::array<std::uint8_t, 16> glyph_bitmap(char c) {
  if (!valid_char(c)) {
    throw std::invalid_argument("glyph outside [A-Za-z ]");
  }
  return font().glyphs[static_cast<unsigned char>(c)];
}

std::pair<PixelImage, GroundTruth> render_document(const DocumentSpec& spec) {
  if (spec.width_px < 1 || spec.height_px < 1 || spec.scale < 1) {
    throw std::invalid_argument("non-positive page geometry");
  }
  PixelImage page;
  page.width_px = spec.width_px;
  page.height_px = spec.height_px;
  page.samples.assign(
      static_cast<std::size_t>(spec.width_px) * spec.height_px, 255);
  GroundTruth gt;

  const int s = spec.scale;
  int pen_y = spec.top_margin_px;  // nominal top of the current glyph cell
  int prev_ink_bottom = -1;

  for (std::size_t li = 0; li < spec.lines.size(); ++li) {
    const LineSpec& line = spec.lines[li];
    if (line.gap_below_px < 0) {
      throw std::invalid_argument("negative inter-line gap");
    }
    const auto [first_row, last_row] = line_ink_rows(line.text);
    if (first_row < 0) {
      throw std::invalid_argument("line has no ink");
    }
    if (li > 0) {
      // Place this line so its ink starts exactly gap_below_px of the
      // previous line's ink bottom.
      pen_y = prev_ink_bottom + 1 + spec.lines[li - 1].gap_below_px -
              first_row * s;
    }

    const int width_needed =
        spec.left_margin_px + static_cast<int>(line.text.size()) * 8 * s;
    if (width_needed > spec.width_px) {
      throw PageOverflowError("line exceeds page width");
    }
    if (pen_y < 0 || pen_y + 16 * s > spec.height_px) {
      throw PageOverflowError("line exceeds page height");
    }

    int ink_top = spec.height_px;
    int ink_bottom = -1;
    for (std::size_t ci = 0; ci < line.text.size(); ++ci) {
      const auto glyph = glyph_bitmap(line.text[ci]);
      const int x0 = spec.left_margin_px + static_cast<int>(ci) * 8 * s;
      for (int r = 0; r < 16; ++r) {
        if (glyph[r] == 0) continue;
        for (int b = 0; b < 8; ++b) {
          if ((glyph[r] & (0x80 >> b)) == 0) continue;
          for (int dy = 0; dy < s; ++dy) {
            const int y = pen_y + r * s + dy;
            for (int dx = 0; dx < s; ++dx) {
              page.at(x0 + b * s + dx, y) = 0;
            }
            ink_top = std::min(ink_top, y);
            ink_bottom = std::max(ink_bottom, y);
          }
        }
      }
    }
    gt.lines.push_back({ink_top, ink_bottom});
    prev_ink_bottom = ink_bottom;
  }
  return {std::move(page), gt};
}

std::vector<DocumentSpec> plan_documents(const CorpusConfig& config,
                                         int tier) {
  std::vector<DocumentSpec> docs;
  docs.reserve(config.docs_per_tier);
  for (int d = 0; d < config.docs_per_tier; ++d) {
    // Stable per-document stream regardless of generation order.
    std::mt19937_64 rng(config.seed * 0x9E3779B97F4A7C15ULL +
                        static_cast<std::uint64_t>(tier) * 1000003ULL +
                        static_cast<std::uint64_t>(d));
    DocumentSpec spec;
    spec.scale = tier;
    spec.width_px = config.base_width_px * tier;
    spec.height_px = config.base_height_px * tier;
    spec.quality = config.quality;
    spec.left_margin_px = 16 * tier;
    spec.top_margin_px = 16 * tier;

    const int max_chars =
        (spec.width_px - 2 * spec.left_margin_px) / (8 * tier);
    const int want_lines =
        config.min_lines + bounded(rng, config.max_lines -
                                            config.min_lines + 1);
    // Worst case a line advances 16*scale + gap rows; stop before the
    // page can overflow.
    int budget = spec.height_px - 2 * spec.top_margin_px;
    for (int l = 0; l < want_lines; ++l) {
      LineSpec line;
      line.text = random_line(rng, max_chars);
      const int gap_idx =
          bounded(rng, static_cast<int>(config.gap_choices_px.size()));
      line.gap_below_px = config.gap_choices_px[gap_idx] * tier;
      const int advance = 16 * tier + line.gap_below_px;
      if (budget - advance < 16 * tier) break;
      budget -= advance;
      spec.lines.push_back(line);
    }
    if (spec.lines.empty()) {
      throw PageOverflowError("page too small for a single line");
    }
    spec.lines.back().gap_below_px = 0;
    if (config.force_zero_gap && spec.lines.size() >= 2) {
      const int pair = bounded(
          rng, static_cast<int>(spec.lines.size()) - 1);
      spec.lines[pair].gap_below_px = 0;
    }
    docs.push_back(std::move(spec));
  }
  return docs;
}

std::vector<ManifestEntry> generate_corpus(const CorpusConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);

  std::vector<ManifestEntry> manifest;
  for (int tier : config.tiers) {
    const std::vector<DocumentSpec> docs = plan_documents(config, tier);
    for (std::size_t d = 0; d < docs.size(); ++d) {
      auto [page, gt] = render_document(docs[d]);
      const std::vector<std::uint8_t> jpeg =
          encode_jpeg_grayscale(page, docs[d].quality);

      std::ostringstream stem;
      stem << "doc_t" << tier << "_";
      stem.width(3);
      stem.fill('0');
      stem << d;
      const std::string jpeg_path =
          (fs::path(config.out_dir) / (stem.str() + ".jpg")).string();
      const std::string gt_path =
          (fs::path(config.out_dir) / (stem.str() + ".gt.txt")).string();

      std::ofstream out(jpeg_path, std::ios::binary);
      if (!out) throw std::runtime_error(jpeg_path + ": cannot write");
      out.write(reinterpret_cast<const char*>(jpeg.data()),
                static_cast<std::streamsize>(jpeg.size()));
      if (!out) throw std::runtime_error(jpeg_path + ": write failed");
      write_ground_truth(gt_path, gt);

      manifest.push_back({jpeg_path, gt_path, tier});
    }
  }

  const std::string manifest_path =
      (fs::path(config.out_dir) / "manifest.txt").string();
  std::ofstream out(manifest_path);
  if (!out) throw std::runtime_error(manifest_path + ": cannot write");
  for (const ManifestEntry& entry : manifest) {
    out << entry.jpeg_path << " " << entry.gt_path << " " << entry.tier
        << "\n";
  }
  if (!out) throw std::runtime_error(manifest_path + ": write failed");
  return manifest;
}

GroundTruth read_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  GroundTruth gt;
  int top = 0;
  int bottom = 0;
  while (in >> top >> bottom) gt.lines.push_back({top, bottom});
  return gt;
}

void write_ground_truth(const std::string& path, const GroundTruth& gt) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  for (const auto& line : gt.lines) {
    out << line.ink_top_px << " " << line.ink_bottom_px << "\n";
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<ManifestEntry> entries;
  ManifestEntry entry;
  while (in >> entry.jpeg_path >> entry.gt_path >> entry.tier) {
    entries.push_back(entry);
  }
  return entries;
}

}  // namespace dctseg
