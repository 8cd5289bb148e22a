#pragma once

#include "drcn/image.hpp"

namespace drcn {

struct PsnrResult {
    double psnr_db = 0.0;  // +infinity when mse == 0
    double mse = 0.0;      // on the 0-255 scale
    double peak = 255.0;
};

/// PSNR after quantizing both images to the 8-bit grid (round(v*255),
/// clamped), the convention denoising benchmarks use:
///   psnr = 10 * log10(peak^2 / mse)
PsnrResult psnr(const Image& a, const Image& b, double peak = 255.0);

}  // namespace drcn
