#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mtt {

// Single-channel 8-bit frame. After pad_to_ctu_grid() the sample grid is an
// integer number of CTUs; origin_width/origin_height keep the pre-padding
// dimensions so quality metrics ignore the replicated border.
struct LumaFrame {
  int width = 0;
  int height = 0;
  int origin_width = 0;
  int origin_height = 0;
  std::vector<uint8_t> samples;  // row-major, width * height

  uint8_t at(int x, int y) const { return samples[size_t(y) * width + x]; }
  uint8_t& at(int x, int y) { return samples[size_t(y) * width + x]; }
};

enum class SynthKind { Flat, HGrad, Checker, Noise };

// Accepts "flat", "hgrad", "checker", "noise"; throws std::invalid_argument.
SynthKind synth_kind_from_name(const std::string& name);
const char* synth_kind_name(SynthKind kind);

// Binary PGM (P5, maxval 255). Malformed header or short pixel data throws
// std::runtime_error.
LumaFrame load_pgm(const std::string& path);

// Headerless 8-bit samples; dimensions come from the caller. Byte count
// mismatch throws std::runtime_error.
LumaFrame load_raw8(const std::string& path, int width, int height);

void write_pgm(const LumaFrame& frame, const std::string& path);

// Deterministic test patterns:
//   flat    all samples 128
//   hgrad   sample(x,y) = floor(255*x / (width-1)); 0 when width == 1
//   checker 8x8 alternating 0/255 tiles
//   noise   seeded uniform samples in [0,255]
LumaFrame synth_frame(SynthKind kind, int width, int height, uint32_t seed);

// Rounds dimensions up to multiples of ctu_size by edge replication.
// Idempotent; origin dimensions are preserved.
LumaFrame pad_to_ctu_grid(const LumaFrame& frame, int ctu_size);

}  // namespace mtt
