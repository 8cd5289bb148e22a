#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drcn/image.hpp"
#include "drcn/tensor.hpp"

namespace drcn {

/// Gaussian noise description. sigma is quoted on the 0-255 scale (the
/// usual benchmark levels are 15/25/50/75) and divided by 255 internally.
struct NoiseSpec {
    double sigma = 25.0;
    std::uint64_t seed = 0;
};

/// y = x + n with n ~ iid Normal(0, (sigma/255)^2) from the seeded generator.
/// The output is intentionally not clamped: residual labels need the true
/// noise.
Image add_gaussian_noise(const Image& image, const NoiseSpec& spec);

/// Square crop with provenance.
struct Patch {
    int channels = 0;
    int size = 0;
    std::vector<double> data;  // planar (c, size, size)
    int source_image = 0;

    double& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * size + y) * size + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * size + y) * size + x];
    }
};

/// All size-by-size windows at the given stride, plus the right/bottom
/// edge-anchored windows so every pixel is covered. Throws ShapeError when
/// the image is smaller than the patch.
std::vector<Patch> extract_patches(const Image& image, int size, int stride,
                                   int source_id = 0);

/// Dihedral-group augmentation of a square patch:
///   0 identity; 1-3 rotations by 90/180/270 (counterclockwise);
///   4 horizontal flip; 5-7 flip followed by the rotations.
Patch augment(const Patch& patch, int transform_id);

struct PatchMeta {
    int source_image = 0;
    int augmentation = 0;
    std::uint64_t noise_seed = 0;
};

/// Mini-batch of (noisy patch, residual label) pairs;
/// residual_label == noisy - clean by construction.
struct PatchBatch {
    Tensor4 noisy;
    Tensor4 residual_label;
    std::vector<PatchMeta> meta;
};

/// Assembles one mini-batch from patches[order[begin..end)]: per patch, a
/// deterministic augmentation pick (when augment is set) and a fresh
/// deterministic noise sample, both derived from (master_seed, epoch, patch
/// id). The residual label is exactly the injected noise.
PatchBatch make_patch_batch(const std::vector<Patch>& patches,
                            const std::vector<int>& order, std::size_t begin,
                            std::size_t end, double sigma, std::uint64_t master_seed,
                            int epoch, bool augment);

/// Self-contained desk-scale corpus: `count` images cycling through smooth
/// gradients, soft checkerboards and low-pass filtered noise, written as
/// PGM/PPM files named img_000.pgm... Pixel values stay inside [0.2, 0.8]
/// so additive-noise statistics are not distorted by clamping.
void write_synthetic_corpus(const std::string& dir, int count, int size,
                            int channels, std::uint64_t seed);
Image make_synthetic_image(int kind, int size, int channels, std::uint64_t seed);

}  // namespace drcn
