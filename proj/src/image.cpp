#include "drcn/image.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace drcn {

Image Image::zeros(int channels, int h, int w) {
    if ((channels != 1 && channels != 3) || h < 1 || w < 1) {
        throw ShapeError("image must have 1 or 3 channels and positive dimensions");
    }
    Image img;
    img.channels = channels;
    img.h = h;
    img.w = w;
    img.pixels.assign(static_cast<std::size_t>(channels) * h * w, 0.0);
    return img;
}

Tensor4 Image::to_tensor() const {
    return Tensor4::from_values({1, channels, h, w}, pixels);
}

Image Image::from_tensor(const Tensor4& t, int batch_index) {
    const Shape4 s = t.shape();
    if (batch_index < 0 || batch_index >= s.n) {
        throw ShapeError("batch index out of range");
    }
    Image img = Image::zeros(s.c, s.h, s.w);
    const double* src = t.plane(batch_index, 0);
    std::copy(src, src + img.pixels.size(), img.pixels.begin());
    return img;
}

namespace {

struct Cursor {
    const std::vector<unsigned char>& bytes;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at byte offset " + std::to_string(pos));
    }

    // One whitespace-delimited ASCII token.
    std::string token() {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        if (pos >= bytes.size()) fail("unexpected end of header");
        std::string t;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) {
            t.push_back(static_cast<char>(bytes[pos++]));
        }
        return t;
    }

    int int_token(const char* what) {
        const std::size_t at = pos;
        const std::string t = token();
        try {
            std::size_t used = 0;
            const int value = std::stoi(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            return value;
        } catch (const std::exception&) {
            pos = at;
            fail(std::string("malformed ") + what + " '" + t + "'");
        }
    }
};

}  // namespace

Image decode_netpbm(const std::vector<unsigned char>& bytes) {
    Cursor cur{bytes};
    const std::string magic = cur.token();
    int channels = 0;
    if (magic == "P5") {
        channels = 1;
    } else if (magic == "P6") {
        channels = 3;
    } else {
        throw ParseError("bad magic '" + magic +
                         "' at byte offset 0: expected binary PGM \"P5\" or PPM \"P6\"");
    }
    const int w = cur.int_token("width");
    const int h = cur.int_token("height");
    if (w < 1 || h < 1) cur.fail("image dimensions must be >= 1");
    const std::size_t maxval_at = cur.pos;
    const int maxval = cur.int_token("maxval");
    if (maxval != 255) {
        throw ParseError("unsupported maxval " + std::to_string(maxval) +
                         " at byte offset " + std::to_string(maxval_at) +
                         ": only 8-bit (255) images are handled");
    }
    // Exactly one whitespace byte separates the header from the payload.
    if (cur.pos >= bytes.size() || !std::isspace(bytes[cur.pos])) {
        cur.fail("expected single whitespace before payload");
    }
    ++cur.pos;

    const std::size_t expected = static_cast<std::size_t>(channels) * h * w;
    const std::size_t available = bytes.size() - cur.pos;
    if (available < expected) {
        throw ParseError("truncated payload at byte offset " + std::to_string(cur.pos) +
                         ": need " + std::to_string(expected) + " bytes, found " +
                         std::to_string(available));
    }
    if (available > expected) {
        throw ParseError("trailing bytes after payload: expected " +
                         std::to_string(expected) + " payload bytes, found " +
                         std::to_string(available));
    }

    Image img = Image::zeros(channels, h, w);
    const unsigned char* p = bytes.data() + cur.pos;
    if (channels == 1) {
        for (std::size_t i = 0; i < expected; ++i) {
            img.pixels[i] = static_cast<double>(p[i]) / 255.0;
        }
    } else {
        // Interleaved RGB on disk, planar in memory.
        const std::size_t plane = static_cast<std::size_t>(h) * w;
        for (std::size_t i = 0; i < plane; ++i) {
            img.pixels[i] = static_cast<double>(p[3 * i]) / 255.0;
            img.pixels[plane + i] = static_cast<double>(p[3 * i + 1]) / 255.0;
            img.pixels[2 * plane + i] = static_cast<double>(p[3 * i + 2]) / 255.0;
        }
    }
    return img;
}

namespace {
unsigned char quantize(double v) {
    const long q = std::lround(v * 255.0);
    return static_cast<unsigned char>(q < 0 ? 0 : (q > 255 ? 255 : q));
}
}  // namespace

std::vector<unsigned char> encode_netpbm(const Image& image) {
    if (image.channels != 1 && image.channels != 3) {
        throw ShapeError("only 1- or 3-channel images can be written");
    }
    char header[64];
    const int n = std::snprintf(header, sizeof(header), "%s\n%d %d\n255\n",
                                image.channels == 1 ? "P5" : "P6", image.w, image.h);
    std::vector<unsigned char> bytes(header, header + n);
    const std::size_t plane = static_cast<std::size_t>(image.h) * image.w;
    if (image.channels == 1) {
        for (std::size_t i = 0; i < plane; ++i) bytes.push_back(quantize(image.pixels[i]));
    } else {
        for (std::size_t i = 0; i < plane; ++i) {
            bytes.push_back(quantize(image.pixels[i]));
            bytes.push_back(quantize(image.pixels[plane + i]));
            bytes.push_back(quantize(image.pixels[2 * plane + i]));
        }
    }
    return bytes;
}

Image read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed while reading '" + path + "'");
    try {
        return decode_netpbm(bytes);
    } catch (const ParseError& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

void write_image(const Image& image, const std::string& path) {
    const auto bytes = encode_netpbm(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace drcn
