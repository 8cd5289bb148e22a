#include "drcn/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "drcn/rng.hpp"

namespace drcn {

Image add_gaussian_noise(const Image& image, const NoiseSpec& spec) {
    if (!(spec.sigma > 0.0)) throw ConfigError("noise sigma must be positive");
    Rng rng(spec.seed);
    const double scale = spec.sigma / 255.0;
    Image out = image;
    for (double& v : out.pixels) v += scale * rng.gaussian();
    return out;
}

namespace {
// Window origins along one axis: 0, stride, 2*stride, ... capped at dim-size,
// plus the edge-anchored dim-size window when the stride walk misses it.
std::vector<int> window_positions(int dim, int size, int stride) {
    std::vector<int> pos;
    const int last = dim - size;
    for (int p = 0; p <= last; p += stride) pos.push_back(p);
    if (pos.back() != last) pos.push_back(last);
    return pos;
}
}  // namespace

std::vector<Patch> extract_patches(const Image& image, int size, int stride,
                                   int source_id) {
    if (size < 1 || stride < 1) throw ConfigError("patch size and stride must be >= 1");
    if (image.h < size || image.w < size) {
        throw ShapeError("image " + std::to_string(image.w) + "x" + std::to_string(image.h) +
                         " is smaller than the patch size " + std::to_string(size));
    }
    const auto ys = window_positions(image.h, size, stride);
    const auto xs = window_positions(image.w, size, stride);
    std::vector<Patch> patches;
    patches.reserve(ys.size() * xs.size());
    for (int y0 : ys) {
        for (int x0 : xs) {
            Patch p;
            p.channels = image.channels;
            p.size = size;
            p.source_image = source_id;
            p.data.resize(static_cast<std::size_t>(image.channels) * size * size);
            for (int c = 0; c < image.channels; ++c) {
                for (int y = 0; y < size; ++y) {
                    const double* src = &image.pixels[(static_cast<std::size_t>(c) * image.h +
                                                       y0 + y) * image.w + x0];
                    std::copy(src, src + size, &p.at(c, y, 0));
                }
            }
            patches.push_back(std::move(p));
        }
    }
    return patches;
}

namespace {

Patch rotate90ccw(const Patch& p) {
    Patch out = p;
    const int s = p.size;
    for (int c = 0; c < p.channels; ++c) {
        for (int y = 0; y < s; ++y) {
            for (int x = 0; x < s; ++x) {
                out.at(c, y, x) = p.at(c, x, s - 1 - y);
            }
        }
    }
    return out;
}

Patch hflip(const Patch& p) {
    Patch out = p;
    const int s = p.size;
    for (int c = 0; c < p.channels; ++c) {
        for (int y = 0; y < s; ++y) {
            for (int x = 0; x < s; ++x) {
                out.at(c, y, x) = p.at(c, y, s - 1 - x);
            }
        }
    }
    return out;
}

}  // namespace

Patch augment(const Patch& patch, int transform_id) {
    if (transform_id < 0 || transform_id > 7) {
        throw ConfigError("augmentation id must be in 0..7, got " +
                          std::to_string(transform_id));
    }
    Patch out = transform_id >= 4 ? hflip(patch) : patch;
    for (int k = 0; k < transform_id % 4; ++k) out = rotate90ccw(out);
    return out;
}

PatchBatch make_patch_batch(const std::vector<Patch>& patches,
                            const std::vector<int>& order, std::size_t begin,
                            std::size_t end, double sigma, std::uint64_t master_seed,
                            int epoch, bool with_augment) {
    if (begin >= end || end > order.size()) {
        throw ConfigError("make_patch_batch: empty or out-of-range batch window");
    }
    const int b = static_cast<int>(end - begin);
    const Patch& proto = patches[static_cast<std::size_t>(order[begin])];
    PatchBatch batch;
    batch.noisy = Tensor4::uninit({b, proto.channels, proto.size, proto.size});
    batch.residual_label = Tensor4::uninit({b, proto.channels, proto.size, proto.size});
    batch.meta.resize(static_cast<std::size_t>(b));
    const double scale = sigma / 255.0;
    const std::int64_t count =
        static_cast<std::int64_t>(proto.channels) * proto.size * proto.size;

    for (int k = 0; k < b; ++k) {
        const int id = order[begin + static_cast<std::size_t>(k)];
        const Patch& clean = patches[static_cast<std::size_t>(id)];
        int aug_id = 0;
        if (with_augment) {
            Rng aug_rng(mix_seed({master_seed, stream::kAugment,
                                  static_cast<std::uint64_t>(epoch),
                                  static_cast<std::uint64_t>(id)}));
            aug_id = static_cast<int>(aug_rng.uniform_index(8));
        }
        const Patch sample = aug_id == 0 ? clean : augment(clean, aug_id);
        const std::uint64_t noise_seed = mix_seed({master_seed, stream::kPatchNoise,
                                                   static_cast<std::uint64_t>(epoch),
                                                   static_cast<std::uint64_t>(id)});
        Rng noise_rng(noise_seed);
        double* noisy = batch.noisy.plane(k, 0);
        double* label = batch.residual_label.plane(k, 0);
        for (std::int64_t i = 0; i < count; ++i) {
            const double n = scale * noise_rng.gaussian();
            noisy[i] = sample.data[static_cast<std::size_t>(i)] + n;
            label[i] = n;
        }
        batch.meta[static_cast<std::size_t>(k)] = {clean.source_image, aug_id, noise_seed};
    }
    return batch;
}

// ---------------------------------------------------------------------------
// Synthetic corpus
// ---------------------------------------------------------------------------

namespace {

// Keep synthetic pixels at least ~2 sigma (sigma = 25/255) away from 0/1 so
// additive Gaussian noise is not clipped by the 8-bit quantization when
// measuring baselines.
constexpr double kLow = 0.2;
constexpr double kHigh = 0.8;

void fill_gradient(Image& img, Rng& rng) {
    const double angle = rng.uniform(0.0, 6.283185307179586);
    const double cx = std::cos(angle), cy = std::sin(angle);
    const double phase = rng.uniform(0.0, 1.0);
    for (int c = 0; c < img.channels; ++c) {
        const double shift = 0.15 * c;
        for (int y = 0; y < img.h; ++y) {
            for (int x = 0; x < img.w; ++x) {
                double t = (cx * x / img.w + cy * y / img.h) * 0.5 + 0.5 + phase + shift;
                t -= std::floor(t);
                img.at(c, y, x) = kLow + (kHigh - kLow) * t;
            }
        }
    }
}

void fill_checkerboard(Image& img, Rng& rng) {
    const int cell = 4 + static_cast<int>(rng.uniform_index(13));
    const double a = rng.uniform(kLow, 0.4);
    const double b = rng.uniform(0.60, kHigh);
    for (int c = 0; c < img.channels; ++c) {
        for (int y = 0; y < img.h; ++y) {
            for (int x = 0; x < img.w; ++x) {
                const bool on = ((x / cell) + (y / cell) + c) % 2 == 0;
                img.at(c, y, x) = on ? a : b;
            }
        }
    }
}

void fill_filtered_noise(Image& img, Rng& rng) {
    // White noise smoothed by a few box-blur passes, then mapped into range.
    const int passes = 2 + static_cast<int>(rng.uniform_index(3));
    for (int c = 0; c < img.channels; ++c) {
        std::vector<double> a(static_cast<std::size_t>(img.h) * img.w);
        for (double& v : a) v = rng.uniform();
        std::vector<double> b(a.size());
        for (int pass = 0; pass < passes; ++pass) {
            for (int y = 0; y < img.h; ++y) {
                for (int x = 0; x < img.w; ++x) {
                    double acc = 0.0;
                    int cnt = 0;
                    for (int dy = -2; dy <= 2; ++dy) {
                        const int yy = y + dy;
                        if (yy < 0 || yy >= img.h) continue;
                        for (int dx = -2; dx <= 2; ++dx) {
                            const int xx = x + dx;
                            if (xx < 0 || xx >= img.w) continue;
                            acc += a[static_cast<std::size_t>(yy) * img.w + xx];
                            ++cnt;
                        }
                    }
                    b[static_cast<std::size_t>(y) * img.w + x] = acc / cnt;
                }
            }
            std::swap(a, b);
        }
        double lo = a[0], hi = a[0];
        for (double v : a) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double span = hi > lo ? hi - lo : 1.0;
        for (int y = 0; y < img.h; ++y) {
            for (int x = 0; x < img.w; ++x) {
                const double t = (a[static_cast<std::size_t>(y) * img.w + x] - lo) / span;
                img.at(c, y, x) = kLow + (kHigh - kLow) * t;
            }
        }
    }
}

}  // namespace

Image make_synthetic_image(int kind, int size, int channels, std::uint64_t seed) {
    Image img = Image::zeros(channels, size, size);
    Rng rng(mix_seed({seed, stream::kCorpus, static_cast<std::uint64_t>(kind)}));
    switch (kind % 3) {
        case 0: fill_gradient(img, rng); break;
        case 1: fill_checkerboard(img, rng); break;
        default: fill_filtered_noise(img, rng); break;
    }
    return img;
}

void write_synthetic_corpus(const std::string& dir, int count, int size,
                            int channels, std::uint64_t seed) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create corpus directory '" + dir + "': " + ec.message());
    for (int i = 0; i < count; ++i) {
        const Image img = make_synthetic_image(i, size, channels,
                                               mix_seed({seed, static_cast<std::uint64_t>(i)}));
        char name[32];
        std::snprintf(name, sizeof(name), "img_%03d.%s", i, channels == 1 ? "pgm" : "ppm");
        write_image(img, (fs::path(dir) / name).string());
    }
}

}  // namespace drcn
