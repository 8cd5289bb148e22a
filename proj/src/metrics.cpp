#include "drcn/metrics.hpp"

#include <cmath>
#include <limits>

namespace drcn {

namespace {
int quantize255(double v) {
    const long q = std::lround(v * 255.0);
    return static_cast<int>(q < 0 ? 0 : (q > 255 ? 255 : q));
}
}  // namespace

PsnrResult psnr(const Image& a, const Image& b, double peak) {
    if (a.channels != b.channels || a.h != b.h || a.w != b.w) {
        throw ShapeError("psnr inputs have different shapes");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = quantize255(a.pixels[i]) - quantize255(b.pixels[i]);
        sq += d * d;
    }
    PsnrResult result;
    result.peak = peak;
    result.mse = sq / static_cast<double>(a.pixels.size());
    result.psnr_db = result.mse > 0.0
                         ? 10.0 * std::log10(peak * peak / result.mse)
                         : std::numeric_limits<double>::infinity();
    return result;
}

}  // namespace drcn
