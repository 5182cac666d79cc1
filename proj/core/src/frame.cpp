#include "mtt/frame.hpp"

#include <cctype>
#include <fstream>
#include <random>
#include <stdexcept>

namespace mtt {

SynthKind synth_kind_from_name(const std::string& name) {
  if (name == "flat") return SynthKind::Flat;
  if (name == "hgrad") return SynthKind::HGrad;
  if (name == "checker") return SynthKind::Checker;
  if (name == "noise") return SynthKind::Noise;
  throw std::invalid_argument("unknown synth kind: " + name);
}

const char* synth_kind_name(SynthKind kind) {
  switch (kind) {
    case SynthKind::Flat: return "flat";
    case SynthKind::HGrad: return "hgrad";
    case SynthKind::Checker: return "checker";
    case SynthKind::Noise: return "noise";
  }
  return "?";
}

namespace {

// Reads one whitespace-delimited PGM header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(char(c));
  }
  return tok;
}

int parse_dim(const std::string& tok, const char* what) {
  if (tok.empty()) throw std::runtime_error(std::string("pgm: missing ") + what);
  for (char c : tok)
    if (!std::isdigit(uint8_t(c)))
      throw std::runtime_error(std::string("pgm: bad ") + what + ": " + tok);
  long v = std::stol(tok);
  if (v <= 0 || v > 1 << 20)
    throw std::runtime_error(std::string("pgm: out-of-range ") + what + ": " + tok);
  return int(v);
}

}  // namespace

LumaFrame load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);

  if (next_token(in) != "P5") throw std::runtime_error("pgm: not a P5 file: " + path);
  int w = parse_dim(next_token(in), "width");
  int h = parse_dim(next_token(in), "height");
  int maxval = parse_dim(next_token(in), "maxval");
  if (maxval != 255) throw std::runtime_error("pgm: only maxval 255 supported");

  LumaFrame f;
  f.width = f.origin_width = w;
  f.height = f.origin_height = h;
  f.samples.resize(size_t(w) * h);
  in.read(reinterpret_cast<char*>(f.samples.data()), std::streamsize(f.samples.size()));
  if (size_t(in.gcount()) != f.samples.size())
    throw std::runtime_error("pgm: truncated pixel data in " + path);
  return f;
}

LumaFrame load_raw8(const std::string& path, int width, int height) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("raw8: zero dimension");
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto size = size_t(in.tellg());
  size_t want = size_t(width) * height;
  if (size != want)
    throw std::runtime_error("raw8: " + path + " holds " + std::to_string(size) +
                             " bytes, expected " + std::to_string(want));
  in.seekg(0);
  LumaFrame f;
  f.width = f.origin_width = width;
  f.height = f.origin_height = height;
  f.samples.resize(want);
  in.read(reinterpret_cast<char*>(f.samples.data()), std::streamsize(want));
  if (size_t(in.gcount()) != want) throw std::runtime_error("raw8: short read on " + path);
  return f;
}

void write_pgm(const LumaFrame& frame, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.samples.data()),
            std::streamsize(frame.samples.size()));
  if (!out) throw std::runtime_error("write failed on " + path);
}

LumaFrame synth_frame(SynthKind kind, int width, int height, uint32_t seed) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("synth: zero dimension");
  LumaFrame f;
  f.width = f.origin_width = width;
  f.height = f.origin_height = height;
  f.samples.resize(size_t(width) * height);

  switch (kind) {
    case SynthKind::Flat:
      std::fill(f.samples.begin(), f.samples.end(), uint8_t(128));
      break;
    case SynthKind::HGrad:
      for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
          f.at(x, y) = width > 1 ? uint8_t(255 * x / (width - 1)) : 0;
      break;
    case SynthKind::Checker:
      for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
          f.at(x, y) = ((x / 8 + y / 8) & 1) ? 255 : 0;
      break;
    case SynthKind::Noise: {
      std::mt19937 rng(seed);
      for (auto& s : f.samples) s = uint8_t(rng() & 0xff);
      break;
    }
  }
  return f;
}

LumaFrame pad_to_ctu_grid(const LumaFrame& frame, int ctu_size) {
  if (ctu_size != 16 && ctu_size != 32 && ctu_size != 64 && ctu_size != 128)
    throw std::invalid_argument("ctu size must be one of 16/32/64/128");
  int pw = (frame.width + ctu_size - 1) / ctu_size * ctu_size;
  int ph = (frame.height + ctu_size - 1) / ctu_size * ctu_size;
  if (pw == frame.width && ph == frame.height) return frame;

  LumaFrame out;
  out.width = pw;
  out.height = ph;
  out.origin_width = frame.origin_width;
  out.origin_height = frame.origin_height;
  out.samples.resize(size_t(pw) * ph);
  for (int y = 0; y < ph; ++y) {
    int sy = std::min(y, frame.height - 1);
    for (int x = 0; x < pw; ++x) {
      int sx = std::min(x, frame.width - 1);
      out.at(x, y) = frame.at(sx, sy);
    }
  }
  return out;
}

}  // namespace mtt
