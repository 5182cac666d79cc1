#pragma once

#include <cstdint>
#include <vector>

#include "mtt/frame.hpp"

namespace mtt {

// Quantizer parameters derived from an integer QP in [0,51]:
//   qstep  = 2^((qp-4)/6)
//   lambda = 0.57 * 2^((qp-12)/3)
struct QpParams {
  int qp = 0;
  double qstep = 1.0;
  double lambda = 0.0;
};

QpParams qp_params(int qp);

bool supported_block_dim(int n);  // {4, 8, 16, 32, 64, 128}

// Orthonormal type-II 2-D DCT over a width x height block (row-major).
// Input is expected to be centered (sample - 128) by the caller.
std::vector<double> dct2d(const std::vector<double>& block, int width, int height);
std::vector<double> idct2d(const std::vector<double>& coeffs, int width, int height);

// Flag/mode proxy charged to every coded leaf.
inline constexpr double kHeaderFloorBits = 4.0;

struct CodedBlock {
  double distortion = 0.0;  // sum of squared sample errors
  double rate_bits = 0.0;   // >= kHeaderFloorBits
  std::vector<uint8_t> reconstruction;  // row-major, same shape as input
};

// Whole-CU coding: center, DCT, dead-zone uniform quantization
// (level = sign(c) * floor(|c|/qstep + 0.5)), dequantize, inverse DCT,
// clamp to [0,255]. Rate is header floor plus an exp-Golomb length proxy of
// 2*floor(log2(|level|+1)) + 1 per nonzero level plus 1 position bit each.
CodedBlock code_block(const uint8_t* src, int stride, int width, int height,
                      const QpParams& qp);
CodedBlock code_block(const LumaFrame& frame, int x, int y, int width, int height,
                      const QpParams& qp);

}  // namespace mtt
