// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0

#include "dctseg/codec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>

#include "dctseg/blocks.hpp"

namespace dctseg {
namespace {

// Maps zigzag scan position to natural (row-major) coefficient index.
constexpr std::array<int, 64> kZigzagToNatural = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
};

// Annex K luminance quantization table, natural order.
constexpr std::array<std::uint8_t, 64> kBaseLuminanceQuant = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99,
};

// Annex K typical luminance Huffman tables.
constexpr std::array<std::uint8_t, 16> kDcLumBits = {
    0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
constexpr std::array<std::uint8_t, 12> kDcLumVals = {0, 1, 2,  3, 4, 5,
                                                     6, 7, 8, 9, 10, 11};
constexpr std::array<std::uint8_t, 16> kAcLumBits = {
    0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 125};
constexpr std::array<std::uint8_t, 162> kAcLumVals = {
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06,
    0x13, 0x51, 0x61, 0x07, 0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xa1, 0x08,
    0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52, 0xd1, 0xf0, 0x24, 0x33, 0x62, 0x72,
    0x82, 0x09, 0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25, 0x26, 0x27, 0x28,
    0x29, 0x2a, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44, 0x45,
    0x46, 0x47, 0x48, 0x49, 0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59,
    0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6a, 0x73, 0x74, 0x75,
    0x76, 0x77, 0x78, 0x79, 0x7a, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
    0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3,
    0xa4, 0xa5, 0xa6, 0xa7, 0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6,
    0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5, 0xc6, 0xc7, 0xc8, 0xc9,
    0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2,
    0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf1, 0xf2, 0xf3, 0xf4,
    0xf5, 0xf6, 0xf7, 0xf8, 0xf9, 0xfa,
};

// Marker codes (the byte after 0xFF).
constexpr std::uint8_t kSOI = 0xD8;
constexpr std::uint8_t kEOI = 0xD9;
constexpr std::uint8_t kSOS = 0xDA;
constexpr std::uint8_t kDQT = 0xDB;
constexpr std::uint8_t kDNL = 0xDC;
constexpr std::uint8_t kDRI = 0xDD;
constexpr std::uint8_t kDHT = 0xC4;
constexpr std::uint8_t kSOF0 = 0xC0;
constexpr std::uint8_t kTEM = 0x01;

bool is_rst(std::uint8_t m) { return m >= 0xD0 && m <= 0xD7; }
bool is_app(std::uint8_t m) { return m >= 0xE0 && m <= 0xEF; }
bool is_sof_family(std::uint8_t m) {
  // SOF1..SOF15 plus DAC and JPG, everything in 0xC0..0xCF except DHT.
  return m >= 0xC0 && m <= 0xCF && m != kDHT;
}

[[noreturn]] void fail(JpegErrorKind kind, const char* what) {
  throw JpegError(kind, what);
}

struct ByteReader {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;

  bool eof() const { return pos >= data.size(); }
  std::size_t remaining() const { return data.size() - pos; }

  std::uint8_t u8() {
    if (eof()) fail(JpegErrorKind::TruncatedStream, "unexpected end of file");
    return data[pos++];
  }
  int u16be() {
    const int hi = u8();
    return (hi << 8) | u8();
  }
  void skip(std::size_t n) {
    if (remaining() < n) {
      fail(JpegErrorKind::TruncatedStream, "segment runs past end of file");
    }
    pos += n;
  }
};

// A marker segment body with its declared length already consumed.
struct Segment {
  std::span<const std::uint8_t> body;
  std::size_t pos = 0;

  std::size_t remaining() const { return body.size() - pos; }
  std::uint8_t u8() {
    if (pos >= body.size()) {
      fail(JpegErrorKind::BadMarker, "segment shorter than its contents");
    }
    return body[pos++];
  }
  int u16be() {
    const int hi = u8();
    return (hi << 8) | u8();
  }
};

Segment read_segment(ByteReader& r) {
  const int length = r.u16be();
  if (length < 2) fail(JpegErrorKind::BadMarker, "segment length below 2");
  const std::size_t body_len = static_cast<std::size_t>(length) - 2;
  if (r.remaining() < body_len) {
    fail(JpegErrorKind::TruncatedStream, "segment runs past end of file");
  }
  Segment seg{r.data.subspan(r.pos, body_len)};
  r.pos += body_len;
  return seg;
}

struct HuffmanTable {
  bool present = false;
  // Canonical decode tables indexed by code length 1..16.
  std::array<std::int32_t, 17> mincode{};
  std::array<std::int32_t, 17> maxcode{};
  std::array<std::int32_t, 17> valptr{};
  std::vector<std::uint8_t> vals;

  void build(const std::uint8_t* bits, std::span<const std::uint8_t> values) {
    vals.assign(values.begin(), values.end());
    std::int32_t code = 0;
    std::int32_t k = 0;
    for (int len = 1; len <= 16; ++len) {
      valptr[len] = k;
      mincode[len] = code;
      code += bits[len - 1];
      k += bits[len - 1];
      maxcode[len] = code - 1;
      if (code > (1 << len)) {
        fail(JpegErrorKind::BadHuffman, "Huffman code space exceeded");
      }
      code <<= 1;
      if (bits[len - 1] == 0) maxcode[len] = -1;
    }
    if (static_cast<std::size_t>(k) != vals.size()) {
      fail(JpegErrorKind::BadHuffman, "Huffman count/value mismatch");
    }
    present = true;
  }
};

// Entropy-coded data reader: unstuffs 0xFF00, stops at real markers, and
// serves restart markers only when explicitly asked for one.
struct BitReader {
  ByteReader& r;
  std::uint32_t bit_buffer = 0;
  int bit_count = 0;

  explicit BitReader(ByteReader& reader) : r(reader) {}

  int next_bit() {
    if (bit_count == 0) {
      if (r.eof()) {
        fail(JpegErrorKind::TruncatedStream, "entropy data ended mid-scan");
      }
      std::uint8_t byte = r.data[r.pos];
      if (byte == 0xFF) {
        if (r.pos + 1 >= r.data.size()) {
          fail(JpegErrorKind::TruncatedStream, "entropy data ended mid-scan");
        }
        const std::uint8_t follow = r.data[r.pos + 1];
        if (follow == 0x00) {
          r.pos += 2;
        } else {
          // A real marker interrupts the scan before it finished.
          fail(JpegErrorKind::TruncatedStream,
               "marker interrupts entropy data mid-scan");
        }
      } else {
        ++r.pos;
      }
      bit_buffer = byte;
      bit_count = 8;
    }
    --bit_count;
    return (bit_buffer >> bit_count) & 1;
  }

  int receive(int n) {
    int v = 0;
    for (int i = 0; i < n; ++i) v = (v << 1) | next_bit();
    return v;
  }

  int decode(const HuffmanTable& table) {
    std::int32_t code = next_bit();
    for (int len = 1; len <= 16; ++len) {
      if (table.maxcode[len] >= 0 && code <= table.maxcode[len]) {
        return table.vals[table.valptr[len] + (code - table.mincode[len])];
      }
      code = (code << 1) | next_bit();
    }
    fail(JpegErrorKind::BadHuffman, "Huffman code longer than 16 bits");
  }

  // Discards partial bits and consumes the next marker, which must be the
  // expected restart code.
  void expect_restart(int index) {
    bit_count = 0;
    while (!r.eof() && r.data[r.pos] == 0xFF && r.pos + 1 < r.data.size() &&
           r.data[r.pos + 1] == 0xFF) {
      ++r.pos;  // fill byte
    }
    if (r.remaining() < 2) {
      fail(JpegErrorKind::TruncatedStream, "missing restart marker");
    }
    if (r.data[r.pos] != 0xFF ||
        r.data[r.pos + 1] != static_cast<std::uint8_t>(0xD0 + index)) {
      fail(JpegErrorKind::BadMarker, "restart marker out of sequence");
    }
    r.pos += 2;
  }

  void align_to_byte() { bit_count = 0; }
};

int extend(int v, int t) {
  if (t == 0) return 0;
  return (v < (1 << (t - 1))) ? v - (1 << t) + 1 : v;
}

struct Component {
  int id = 0;
  int h = 1;
  int v = 1;
  int quant_index = 0;
  int dc_table = 0;
  int ac_table = 0;
  int dc_predictor = 0;
  int blocks_wide = 0;   // in the component's own sampling grid
  int blocks_high = 0;
};

struct ParserState {
  std::array<QuantTable, 4> quant_tables{};
  std::array<bool, 4> quant_present{};
  std::array<HuffmanTable, 4> dc_tables;
  std::array<HuffmanTable, 4> ac_tables;
  std::vector<Component> components;
  int width = 0;
  int height = 0;
  int max_h = 1;
  int max_v = 1;
  int restart_interval = 0;
  bool have_frame = false;
  bool scan_done = false;
};

void parse_dqt(Segment seg, ParserState& st) {
  while (seg.remaining() > 0) {
    const int pq_tq = seg.u8();
    const int pq = pq_tq >> 4;
    const int tq = pq_tq & 0x0F;
    if (pq > 1) fail(JpegErrorKind::BadMarker, "invalid DQT precision");
    if (tq > 3) fail(JpegErrorKind::BadMarker, "invalid DQT table id");
    QuantTable table;
    for (int i = 0; i < 64; ++i) {
      const int value = pq ? seg.u16be() : seg.u8();
      if (value == 0) fail(JpegErrorKind::BadMarker, "zero quantizer entry");
      table.q[kZigzagToNatural[i]] = static_cast<std::uint16_t>(value);
    }
    st.quant_tables[tq] = table;
    st.quant_present[tq] = true;
  }
}

void parse_dht(Segment seg, ParserState& st) {
  while (seg.remaining() > 0) {
    const int tc_th = seg.u8();
    const int tc = tc_th >> 4;
    const int th = tc_th & 0x0F;
    if (tc > 1) fail(JpegErrorKind::BadHuffman, "invalid DHT class");
    if (th > 3) fail(JpegErrorKind::BadHuffman, "invalid DHT table id");
    std::array<std::uint8_t, 16> bits;
    int total = 0;
    for (int i = 0; i < 16; ++i) {
      bits[i] = seg.u8();
      total += bits[i];
    }
    if (total > 256) {
      fail(JpegErrorKind::BadHuffman, "too many Huffman values");
    }
    if (seg.remaining() < static_cast<std::size_t>(total)) {
      fail(JpegErrorKind::BadMarker, "DHT values exceed segment");
    }
    std::vector<std::uint8_t> vals(total);
    for (int i = 0; i < total; ++i) vals[i] = seg.u8();
    auto& table = tc == 0 ? st.dc_tables[th] : st.ac_tables[th];
    table.build(bits.data(), vals);
  }
}

void parse_sof0(Segment seg, ParserState& st, const ParseOptions& options) {
  if (st.have_frame) fail(JpegErrorKind::BadMarker, "duplicate frame header");
  const int precision = seg.u8();
  if (precision != 8) {
    fail(JpegErrorKind::UnsupportedMode, "only 8-bit precision supported");
  }
  st.height = seg.u16be();
  st.width = seg.u16be();
  if (st.height == 0) {
    fail(JpegErrorKind::UnsupportedMode, "DNL-deferred height unsupported");
  }
  if (st.width == 0) fail(JpegErrorKind::BadMarker, "zero image width");
  const int nf = seg.u8();
  if (nf < 1 || nf > 4) {
    fail(JpegErrorKind::BadMarker, "component count outside 1..4");
  }
  st.components.resize(nf);
  for (auto& comp : st.components) {
    comp.id = seg.u8();
    const int hv = seg.u8();
    comp.h = hv >> 4;
    comp.v = hv & 0x0F;
    if (comp.h < 1 || comp.h > 4 || comp.v < 1 || comp.v > 4) {
      fail(JpegErrorKind::BadMarker, "sampling factor outside 1..4");
    }
    comp.quant_index = seg.u8();
    if (comp.quant_index > 3) {
      fail(JpegErrorKind::BadMarker, "invalid quant table selector");
    }
    st.max_h = std::max(st.max_h, comp.h);
    st.max_v = std::max(st.max_v, comp.v);
  }
  if (seg.remaining() != 0) {
    fail(JpegErrorKind::BadMarker, "frame header length mismatch");
  }
  for (auto& comp : st.components) {
    const std::int64_t samples_w =
        (static_cast<std::int64_t>(st.width) * comp.h + st.max_h - 1) /
        st.max_h;
    const std::int64_t samples_h =
        (static_cast<std::int64_t>(st.height) * comp.v + st.max_v - 1) /
        st.max_v;
    comp.blocks_wide = static_cast<int>((samples_w + 7) / 8);
    comp.blocks_high = static_cast<int>((samples_h + 7) / 8);
  }
  // Only the first component's blocks are retained; refuse frames whose
  // grid would not fit the caller's memory budget before allocating it.
  const auto& lum = st.components.front();
  const std::uint64_t bytes = static_cast<std::uint64_t>(lum.blocks_wide) *
                              lum.blocks_high * sizeof(QuantizedBlock);
  if (bytes > options.max_coefficient_bytes) {
    fail(JpegErrorKind::ResourceLimit, "coefficient grid exceeds budget");
  }
  st.have_frame = true;
}

void decode_block(BitReader& bits, Component& comp, const HuffmanTable& dc,
                  const HuffmanTable& ac, QuantizedBlock* out) {
  const int t = bits.decode(dc);
  if (t > 11) fail(JpegErrorKind::BadHuffman, "DC category above 11");
  const int diff = extend(bits.receive(t), t);
  comp.dc_predictor += diff;
  if (out != nullptr) {
    out->coef.fill(0);
    out->coef[0] = static_cast<std::int16_t>(std::clamp(
        comp.dc_predictor, -32768, 32767));
  }
  int k = 1;
  while (k < 64) {
    const int rs = bits.decode(ac);
    const int run = rs >> 4;
    const int size = rs & 0x0F;
    if (size == 0) {
      if (run == 15) {
        k += 16;
        continue;
      }
      if (run != 0) {
        fail(JpegErrorKind::BadHuffman, "EOBn symbol in baseline scan");
      }
      break;
    }
    if (size > 10) fail(JpegErrorKind::BadHuffman, "AC category above 10");
    k += run;
    if (k > 63) fail(JpegErrorKind::BadHuffman, "AC run leaves the block");
    const int value = extend(bits.receive(size), size);
    if (out != nullptr) {
      out->coef[kZigzagToNatural[k]] = static_cast<std::int16_t>(value);
    }
    ++k;
  }
}

CoefficientImage decode_scan(ByteReader& r, Segment header, ParserState& st) {
  if (!st.have_frame) fail(JpegErrorKind::BadMarker, "SOS before SOF");
  if (st.scan_done) {
    fail(JpegErrorKind::UnsupportedMode, "multi-scan streams unsupported");
  }
  const int ns = header.u8();
  if (ns != static_cast<int>(st.components.size())) {
    fail(JpegErrorKind::UnsupportedMode,
         "non-interleaved multi-scan unsupported");
  }
  for (int i = 0; i < ns; ++i) {
    const int id = header.u8();
    const int tables = header.u8();
    auto it = std::find_if(st.components.begin(), st.components.end(),
                           [id](const Component& c) { return c.id == id; });
    if (it == st.components.end()) {
      fail(JpegErrorKind::BadMarker, "scan references unknown component");
    }
    it->dc_table = tables >> 4;
    it->ac_table = tables & 0x0F;
    if (it->dc_table > 3 || it->ac_table > 3) {
      fail(JpegErrorKind::BadMarker, "invalid Huffman table selector");
    }
    if (!st.dc_tables[it->dc_table].present ||
        !st.ac_tables[it->ac_table].present) {
      fail(JpegErrorKind::BadHuffman, "scan uses undefined Huffman table");
    }
    if (!st.quant_present[it->quant_index]) {
      fail(JpegErrorKind::BadMarker, "scan uses undefined quant table");
    }
  }
  const int ss = header.u8();
  const int se = header.u8();
  const int ahal = header.u8();
  if (ss != 0 || se != 63 || ahal != 0) {
    fail(JpegErrorKind::UnsupportedMode, "spectral selection unsupported");
  }
  if (header.remaining() != 0) {
    fail(JpegErrorKind::BadMarker, "scan header length mismatch");
  }

  Component& lum = st.components.front();
  CoefficientImage ci;
  const std::int64_t lum_w =
      (static_cast<std::int64_t>(st.width) * lum.h + st.max_h - 1) / st.max_h;
  const std::int64_t lum_h =
      (static_cast<std::int64_t>(st.height) * lum.v + st.max_v - 1) / st.max_v;
  ci.width_px = static_cast<int>(lum_w);
  ci.height_px = static_cast<int>(lum_h);
  ci.blocks_wide = lum.blocks_wide;
  ci.blocks_high = lum.blocks_high;
  ci.blocks.resize(static_cast<std::size_t>(ci.blocks_wide) * ci.blocks_high);
  ci.quant_table = st.quant_tables[lum.quant_index];
  ci.source_component = lum.id;

  const bool interleaved = st.components.size() > 1;
  std::int64_t mcus_x;
  std::int64_t mcus_y;
  if (interleaved) {
    std::int64_t blocks_per_mcu = 0;
    for (const auto& comp : st.components) blocks_per_mcu += comp.h * comp.v;
    if (blocks_per_mcu > 10) {
      fail(JpegErrorKind::BadMarker, "MCU holds more than 10 blocks");
    }
    mcus_x = (st.width + 8 * st.max_h - 1) / (8 * st.max_h);
    mcus_y = (st.height + 8 * st.max_v - 1) / (8 * st.max_v);
  } else {
    mcus_x = lum.blocks_wide;
    mcus_y = lum.blocks_high;
  }

  BitReader bits(r);
  QuantizedBlock scratch;
  std::int64_t mcu_index = 0;
  int rst_index = 0;
  const std::int64_t total_mcus = mcus_x * mcus_y;
  for (std::int64_t my = 0; my < mcus_y; ++my) {
    for (std::int64_t mx = 0; mx < mcus_x; ++mx) {
      if (st.restart_interval > 0 && mcu_index > 0 &&
          mcu_index % st.restart_interval == 0) {
        bits.expect_restart(rst_index);
        rst_index = (rst_index + 1) & 7;
        for (auto& comp : st.components) comp.dc_predictor = 0;
      }
      if (interleaved) {
        for (std::size_t ci_idx = 0; ci_idx < st.components.size(); ++ci_idx) {
          Component& comp = st.components[ci_idx];
          const HuffmanTable& dc = st.dc_tables[comp.dc_table];
          const HuffmanTable& ac = st.ac_tables[comp.ac_table];
          for (int by = 0; by < comp.v; ++by) {
            for (int bx = 0; bx < comp.h; ++bx) {
              const std::int64_t row = my * comp.v + by;
              const std::int64_t col = mx * comp.h + bx;
              const bool keep = ci_idx == 0 && row < ci.blocks_high &&
                                col < ci.blocks_wide;
              QuantizedBlock* slot =
                  keep ? &ci.block(static_cast<int>(row),
                                   static_cast<int>(col))
                       : nullptr;
              decode_block(bits, comp, dc, ac, keep ? slot : &scratch);
            }
          }
        }
      } else {
        decode_block(bits, lum, st.dc_tables[lum.dc_table],
                     st.ac_tables[lum.ac_table],
                     &ci.block(static_cast<int>(my), static_cast<int>(mx)));
      }
      ++mcu_index;
    }
  }
  (void)total_mcus;
  bits.align_to_byte();
  st.scan_done = true;
  return ci;
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

struct ForwardCosines {
  double basis[8][8];  // basis[u][x] = C(u) cos((2x+1) u pi / 16)

  ForwardCosines() {
    const double pi = std::acos(-1.0);
    for (int u = 0; u < 8; ++u) {
      const double cu = (u == 0) ? 1.0 / std::sqrt(2.0) : 1.0;
      for (int x = 0; x < 8; ++x) {
        basis[u][x] = cu * std::cos((2 * x + 1) * u * pi / 16.0);
      }
    }
  }
};

const ForwardCosines& forward_cosines() {
  static const ForwardCosines table;
  return table;
}

void fdct_quantize(const double spatial[8][8], const QuantTable& quant,
                   QuantizedBlock& out) {
  const ForwardCosines& ct = forward_cosines();
  double rows[8][8];
  for (int y = 0; y < 8; ++y) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int x = 0; x < 8; ++x) acc += spatial[y][x] * ct.basis[u][x];
      rows[y][u] = acc;
    }
  }
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      double acc = 0.0;
      for (int y = 0; y < 8; ++y) acc += rows[y][u] * ct.basis[v][y];
      const double coeff = acc / 4.0;
      const long q = std::lround(coeff / quant.q[v * 8 + u]);
      out.coef[v * 8 + u] = static_cast<std::int16_t>(
          std::clamp<long>(q, -32768, 32767));
    }
  }
}

struct EncoderHuffman {
  std::array<std::uint16_t, 256> code{};
  std::array<std::uint8_t, 256> size{};

  void build(std::span<const std::uint8_t> bits,
             std::span<const std::uint8_t> vals) {
    std::uint16_t next_code = 0;
    std::size_t k = 0;
    for (int len = 1; len <= 16; ++len) {
      for (int i = 0; i < bits[len - 1]; ++i) {
        code[vals[k]] = next_code;
        size[vals[k]] = static_cast<std::uint8_t>(len);
        ++next_code;
        ++k;
      }
      next_code <<= 1;
    }
  }
};

struct BitWriter {
  std::vector<std::uint8_t>& out;
  std::uint32_t buffer = 0;
  int count = 0;

  explicit BitWriter(std::vector<std::uint8_t>& sink) : out(sink) {}

  void put(std::uint32_t value, int n) {
    for (int i = n - 1; i >= 0; --i) {
      buffer = (buffer << 1) | ((value >> i) & 1);
      if (++count == 8) {
        const std::uint8_t byte = static_cast<std::uint8_t>(buffer & 0xFF);
        out.push_back(byte);
        if (byte == 0xFF) out.push_back(0x00);
        buffer = 0;
        count = 0;
      }
    }
  }

  // Pads the current byte with 1 bits, the standard scan filler.
  void flush() {
    if (count > 0) put(0xFF, 8 - count);
  }
};

int bit_category(int value) {
  int magnitude = value < 0 ? -value : value;
  int bits = 0;
  while (magnitude > 0) {
    ++bits;
    magnitude >>= 1;
  }
  return bits;
}

void encode_block(BitWriter& bw, const QuantizedBlock& block,
                  int& dc_predictor, const EncoderHuffman& dc,
                  const EncoderHuffman& ac) {
  const int diff = block.coef[0] - dc_predictor;
  dc_predictor = block.coef[0];
  const int dc_cat = bit_category(diff);
  if (dc_cat > 11) {
    throw std::invalid_argument("DC coefficient outside baseline range");
  }
  bw.put(dc.code[dc_cat], dc.size[dc_cat]);
  if (dc_cat > 0) {
    const int bits = diff < 0 ? diff + (1 << dc_cat) - 1 : diff;
    bw.put(static_cast<std::uint32_t>(bits), dc_cat);
  }

  int run = 0;
  for (int k = 1; k < 64; ++k) {
    const int value = block.coef[kZigzagToNatural[k]];
    if (value == 0) {
      ++run;
      continue;
    }
    while (run > 15) {
      bw.put(ac.code[0xF0], ac.size[0xF0]);
      run -= 16;
    }
    const int cat = bit_category(value);
    if (cat > 10) {
      throw std::invalid_argument("AC coefficient outside baseline range");
    }
    const int symbol = (run << 4) | cat;
    bw.put(ac.code[symbol], ac.size[symbol]);
    const int bits = value < 0 ? value + (1 << cat) - 1 : value;
    bw.put(static_cast<std::uint32_t>(bits), cat);
    run = 0;
  }
  if (run > 0) bw.put(ac.code[0x00], ac.size[0x00]);
}

void append_u16be(std::vector<std::uint8_t>& out, int value) {
  out.push_back(static_cast<std::uint8_t>((value >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(value & 0xFF));
}

void append_marker(std::vector<std::uint8_t>& out, std::uint8_t code) {
  out.push_back(0xFF);
  out.push_back(code);
}

}  // namespace

const char* to_string(JpegErrorKind kind) {
  switch (kind) {
    case JpegErrorKind::UnsupportedMode: return "UnsupportedMode";
    case JpegErrorKind::TruncatedStream: return "TruncatedStream";
    case JpegErrorKind::BadMarker: return "BadMarker";
    case JpegErrorKind::BadHuffman: return "BadHuffman";
    case JpegErrorKind::ResourceLimit: return "ResourceLimit";
  }
  return "Unknown";
}

CoefficientImage parse_jpeg(std::span<const std::uint8_t> data,
                            const ParseOptions& options) {
  ByteReader r{data};
  if (r.u8() != 0xFF || r.u8() != kSOI) {
    fail(JpegErrorKind::BadMarker, "missing SOI marker");
  }
  ParserState st;
  CoefficientImage result;

  for (;;) {
    std::uint8_t byte = r.u8();
    if (byte != 0xFF) {
      fail(JpegErrorKind::BadMarker, "expected marker, found data byte");
    }
    std::uint8_t marker = r.u8();
    while (marker == 0xFF) marker = r.u8();  // fill bytes

    if (marker == kEOI) {
      if (!st.scan_done) {
        fail(JpegErrorKind::TruncatedStream, "EOI before any scan");
      }
      return result;
    }
    if (marker == kSOI || is_rst(marker) || marker == kTEM || marker == 0x00) {
      fail(JpegErrorKind::BadMarker, "unexpected standalone marker");
    }
    if (is_app(marker) || marker == 0xFE) {  // APPn, COM
      read_segment(r);
      continue;
    }
    if (marker == kDQT) {
      parse_dqt(read_segment(r), st);
      continue;
    }
    if (marker == kDHT) {
      parse_dht(read_segment(r), st);
      continue;
    }
    if (marker == kDRI) {
      Segment seg = read_segment(r);
      st.restart_interval = seg.u16be();
      if (seg.remaining() != 0) {
        fail(JpegErrorKind::BadMarker, "DRI length mismatch");
      }
      continue;
    }
    if (marker == kDNL) {
      read_segment(r);
      continue;
    }
    if (marker == kSOF0) {
      parse_sof0(read_segment(r), st, options);
      continue;
    }
    if (is_sof_family(marker)) {
      fail(JpegErrorKind::UnsupportedMode,
           "only baseline sequential (SOF0) supported");
    }
    if (marker == kSOS) {
      result = decode_scan(r, read_segment(r), st);
      continue;
    }
    fail(JpegErrorKind::BadMarker, "unrecognized marker");
  }
}

CoefficientImage encode_coefficients(const PixelImage& image, int quality) {
  if (quality < 1 || quality > 100) {
    throw InvalidQualityError("quality must be in [1, 100]");
  }
  if (image.width_px < 1 || image.height_px < 1 ||
      image.samples.size() != static_cast<std::size_t>(image.width_px) *
                                  image.height_px) {
    throw std::invalid_argument("image is empty or inconsistently sized");
  }

  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  QuantTable quant;
  for (int i = 0; i < 64; ++i) {
    const int scaled = (kBaseLuminanceQuant[i] * scale + 50) / 100;
    quant.q[i] = static_cast<std::uint16_t>(std::clamp(scaled, 1, 255));
  }

  CoefficientImage ci;
  ci.width_px = image.width_px;
  ci.height_px = image.height_px;
  ci.blocks_wide = (image.width_px + 7) / 8;
  ci.blocks_high = (image.height_px + 7) / 8;
  ci.blocks.resize(static_cast<std::size_t>(ci.blocks_wide) * ci.blocks_high);
  ci.quant_table = quant;
  ci.source_component = 1;

  double spatial[8][8];
  for (int br = 0; br < ci.blocks_high; ++br) {
    for (int bc = 0; bc < ci.blocks_wide; ++bc) {
      for (int y = 0; y < 8; ++y) {
        const int sy = std::min(br * 8 + y, image.height_px - 1);
        for (int x = 0; x < 8; ++x) {
          const int sx = std::min(bc * 8 + x, image.width_px - 1);
          spatial[y][x] = static_cast<double>(image.at(sx, sy)) - 128.0;
        }
      }
      fdct_quantize(spatial, quant, ci.block(br, bc));
    }
  }
  return ci;
}

std::vector<std::uint8_t> serialize_jpeg(const CoefficientImage& image,
                                         const EncodeOptions& options) {
  if (image.width_px < 1 || image.height_px < 1 ||
      image.blocks_wide != (image.width_px + 7) / 8 ||
      image.blocks_high != (image.height_px + 7) / 8 ||
      image.blocks.size() != static_cast<std::size_t>(image.blocks_wide) *
                                 image.blocks_high) {
    throw std::invalid_argument("coefficient image is inconsistently sized");
  }
  if (image.width_px > 0xFFFF || image.height_px > 0xFFFF) {
    throw std::invalid_argument("image dimensions exceed 65535");
  }
  if (options.restart_interval_mcus < 0 ||
      options.restart_interval_mcus > 0xFFFF) {
    throw std::invalid_argument("restart interval outside [0, 65535]");
  }

  bool wide_quant = false;
  for (int i = 0; i < 64; ++i) {
    if (image.quant_table.q[i] == 0) {
      throw std::invalid_argument("quantization table has a zero entry");
    }
    if (image.quant_table.q[i] > 255) wide_quant = true;
  }

  std::vector<std::uint8_t> out;
  append_marker(out, kSOI);

  append_marker(out, 0xE0);  // APP0 / JFIF
  append_u16be(out, 16);
  const char jfif[5] = {'J', 'F', 'I', 'F', '\0'};
  out.insert(out.end(), jfif, jfif + 5);
  out.push_back(1);  // version 1.1
  out.push_back(1);
  out.push_back(0);  // aspect-ratio units
  append_u16be(out, 1);
  append_u16be(out, 1);
  out.push_back(0);  // no thumbnail
  out.push_back(0);

  append_marker(out, kDQT);
  append_u16be(out, 2 + 1 + (wide_quant ? 128 : 64));
  out.push_back(wide_quant ? 0x10 : 0x00);
  for (int i = 0; i < 64; ++i) {
    const std::uint16_t q = image.quant_table.q[kZigzagToNatural[i]];
    if (wide_quant) {
      append_u16be(out, q);
    } else {
      out.push_back(static_cast<std::uint8_t>(q));
    }
  }

  append_marker(out, kSOF0);
  append_u16be(out, 11);
  out.push_back(8);  // sample precision
  append_u16be(out, image.height_px);
  append_u16be(out, image.width_px);
  out.push_back(1);  // one component
  out.push_back(static_cast<std::uint8_t>(image.source_component));
  out.push_back(0x11);  // h=1, v=1
  out.push_back(0);     // quant table 0

  const auto emit_dht = [&out](int tc, std::span<const std::uint8_t> bits,
                               std::span<const std::uint8_t> vals) {
    append_marker(out, kDHT);
    append_u16be(out, static_cast<int>(2 + 1 + 16 + vals.size()));
    out.push_back(static_cast<std::uint8_t>(tc << 4));
    out.insert(out.end(), bits.begin(), bits.end());
    out.insert(out.end(), vals.begin(), vals.end());
  };
  emit_dht(0, kDcLumBits, kDcLumVals);
  emit_dht(1, kAcLumBits, kAcLumVals);

  if (options.restart_interval_mcus > 0) {
    append_marker(out, kDRI);
    append_u16be(out, 4);
    append_u16be(out, options.restart_interval_mcus);
  }

  append_marker(out, kSOS);
  append_u16be(out, 8);
  out.push_back(1);  // one scan component
  out.push_back(static_cast<std::uint8_t>(image.source_component));
  out.push_back(0x00);  // DC table 0, AC table 0
  out.push_back(0);     // Ss
  out.push_back(63);    // Se
  out.push_back(0);     // Ah/Al

  EncoderHuffman dc_huff;
  EncoderHuffman ac_huff;
  dc_huff.build(kDcLumBits, kDcLumVals);
  ac_huff.build(kAcLumBits, kAcLumVals);

  BitWriter bw(out);
  int dc_predictor = 0;
  int rst_index = 0;
  std::int64_t mcu_index = 0;
  const int interval = options.restart_interval_mcus;
  for (int br = 0; br < image.blocks_high; ++br) {
    for (int bc = 0; bc < image.blocks_wide; ++bc) {
      if (interval > 0 && mcu_index > 0 && mcu_index % interval == 0) {
        bw.flush();
        append_marker(out, static_cast<std::uint8_t>(0xD0 + rst_index));
        rst_index = (rst_index + 1) & 7;
        dc_predictor = 0;
      }
      encode_block(bw, image.block(br, bc), dc_predictor, dc_huff, ac_huff);
      ++mcu_index;
    }
  }
  bw.flush();

  append_marker(out, kEOI);
  return out;
}

std::vector<std::uint8_t> encode_jpeg_grayscale(const PixelImage& image,
                                                int quality,
                                                const EncodeOptions& options) {
  return serialize_jpeg(encode_coefficients(image, quality), options);
}

PixelImage decode_pixels(const CoefficientImage& image) {
  PixelImage out;
  out.width_px = image.width_px;
  out.height_px = image.height_px;
  out.samples.assign(
      static_cast<std::size_t>(image.width_px) * image.height_px, 0);

  for (int br = 0; br < image.blocks_high; ++br) {
    for (int bc = 0; bc < image.blocks_wide; ++bc) {
      const PixelBlock pixels =
          idct_8x8(dequantize(image.block(br, bc), image.quant_table));
      const int y_limit = std::min(8, image.height_px - br * 8);
      const int x_limit = std::min(8, image.width_px - bc * 8);
      for (int y = 0; y < y_limit; ++y) {
        for (int x = 0; x < x_limit; ++x) {
          out.at(bc * 8 + x, br * 8 + y) = pixels.at(x, y);
        }
      }
    }
  }
  return out;
}

}  // namespace dctseg
