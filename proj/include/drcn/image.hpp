#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drcn/tensor.hpp"

namespace drcn {

/// A gray (1 channel) or RGB (3 channel) image with pixels in [0,1], stored
/// planar (c, h, w) to match the tensor layout.
struct Image {
    int channels = 0;
    int h = 0;
    int w = 0;
    std::vector<double> pixels;

    static Image zeros(int channels, int h, int w);

    double& at(int c, int y, int x) {
        return pixels[(static_cast<std::size_t>(c) * h + y) * w + x];
    }
    double at(int c, int y, int x) const {
        return pixels[(static_cast<std::size_t>(c) * h + y) * w + x];
    }

    Tensor4 to_tensor() const;  // shape (1, channels, h, w)
    static Image from_tensor(const Tensor4& t, int batch_index = 0);
};

// Binary netpbm I/O: PGM "P5" (gray) and PPM "P6" (RGB), maxval 255,
// whitespace-delimited header tokens, row-major payload, interleaved RGB.
// Pixels map v/255 on read; writes quantize with round(v*255) clamped to
// [0,255]. Parse errors carry the offending byte offset.

Image decode_netpbm(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> encode_netpbm(const Image& image);

Image read_image(const std::string& path);
void write_image(const Image& image, const std::string& path);

}  // namespace drcn
