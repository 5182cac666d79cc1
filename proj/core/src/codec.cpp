#include "mtt/codec.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace mtt {

QpParams qp_params(int qp) {
  if (qp < 0 || qp > 51) throw std::invalid_argument("qp out of [0,51]");
  QpParams p;
  p.qp = qp;
  p.qstep = std::exp2((qp - 4) / 6.0);
  p.lambda = 0.57 * std::exp2((qp - 12) / 3.0);
  return p;
}

bool supported_block_dim(int n) {
  return n == 4 || n == 8 || n == 16 || n == 32 || n == 64 || n == 128;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> make_basis(int n) {
  std::vector<double> b(size_t(n) * n);
  for (int k = 0; k < n; ++k) {
    double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
    for (int i = 0; i < n; ++i)
      b[size_t(k) * n + i] = scale * std::cos(kPi * (2 * i + 1) * k / (2.0 * n));
  }
  return b;
}

// Orthonormal DCT-II basis for size n, row k holds the k-th basis vector.
// All sizes are built up front so concurrent callers only ever read.
const std::vector<double>& dct_basis(int n) {
  static const std::array<std::vector<double>, 6> cache = {
      make_basis(4),  make_basis(8),  make_basis(16),
      make_basis(32), make_basis(64), make_basis(128)};
  int idx = 0;
  for (int s = 4; s != n; s *= 2) ++idx;
  return cache[idx];
}

void check_dims(int width, int height) {
  if (!supported_block_dim(width) || !supported_block_dim(height))
    throw std::invalid_argument("unsupported block dimension");
}

// out = B * in (transform columns of a height x width block when B is the
// height-basis) -- implemented as generic row transform on each axis below.
void transform_rows(const std::vector<double>& basis, bool inverse,
                    const double* in, double* out, int rows, int cols) {
  // One output row at a time; basis is cols x cols.
  for (int r = 0; r < rows; ++r) {
    const double* src = in + size_t(r) * cols;
    double* dst = out + size_t(r) * cols;
    for (int k = 0; k < cols; ++k) {
      double acc = 0.0;
      if (!inverse) {
        const double* bk = basis.data() + size_t(k) * cols;
        for (int i = 0; i < cols; ++i) acc += bk[i] * src[i];
      } else {
        for (int i = 0; i < cols; ++i) acc += basis[size_t(i) * cols + k] * src[i];
      }
      dst[k] = acc;
    }
  }
}

void transform_cols(const std::vector<double>& basis, bool inverse,
                    const double* in, double* out, int rows, int cols) {
  for (int c = 0; c < cols; ++c) {
    for (int k = 0; k < rows; ++k) {
      double acc = 0.0;
      if (!inverse) {
        const double* bk = basis.data() + size_t(k) * rows;
        for (int i = 0; i < rows; ++i) acc += bk[i] * in[size_t(i) * cols + c];
      } else {
        for (int i = 0; i < rows; ++i)
          acc += basis[size_t(i) * rows + k] * in[size_t(i) * cols + c];
      }
      out[size_t(k) * cols + c] = acc;
    }
  }
}

std::vector<double> separable_2d(const std::vector<double>& block, int width,
                                 int height, bool inverse) {
  check_dims(width, height);
  if (block.size() != size_t(width) * height)
    throw std::invalid_argument("block size mismatch");
  std::vector<double> tmp(block.size()), out(block.size());
  transform_rows(dct_basis(width), inverse, block.data(), tmp.data(), height, width);
  transform_cols(dct_basis(height), inverse, tmp.data(), out.data(), height, width);
  return out;
}

}  // namespace

std::vector<double> dct2d(const std::vector<double>& block, int width, int height) {
  return separable_2d(block, width, height, false);
}

std::vector<double> idct2d(const std::vector<double>& coeffs, int width, int height) {
  return separable_2d(coeffs, width, height, true);
}

CodedBlock code_block(const uint8_t* src, int stride, int width, int height,
                      const QpParams& qp) {
  check_dims(width, height);
  size_t n = size_t(width) * height;

  std::vector<double> centered(n);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      centered[size_t(y) * width + x] = double(src[size_t(y) * stride + x]) - 128.0;

  std::vector<double> coeffs = dct2d(centered, width, height);

  double rate = kHeaderFloorBits;
  for (auto& c : coeffs) {
    long long level = (long long)(std::floor(std::abs(c) / qp.qstep + 0.5));
    if (c < 0) level = -level;
    if (level != 0) {
      long long mag = level < 0 ? -level : level;
      rate += 2.0 * std::floor(std::log2(double(mag + 1))) + 1.0 + 1.0;
    }
    c = double(level) * qp.qstep;
  }

  std::vector<double> recon = idct2d(coeffs, width, height);

  CodedBlock out;
  out.rate_bits = rate;
  out.reconstruction.resize(n);
  for (size_t i = 0; i < n; ++i) {
    long v = std::lround(recon[i] + 128.0);
    if (v < 0) v = 0;
    if (v > 255) v = 255;
    out.reconstruction[i] = uint8_t(v);
  }
  double dist = 0.0;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double d = double(src[size_t(y) * stride + x]) -
                 double(out.reconstruction[size_t(y) * width + x]);
      dist += d * d;
    }
  out.distortion = dist;
  return out;
}

CodedBlock code_block(const LumaFrame& frame, int x, int y, int width, int height,
                      const QpParams& qp) {
  if (x < 0 || y < 0 || x + width > frame.width || y + height > frame.height)
    throw std::invalid_argument("block outside frame");
  return code_block(frame.samples.data() + size_t(y) * frame.width + x, frame.width,
                    width, height, qp);
}

}  // namespace mtt
