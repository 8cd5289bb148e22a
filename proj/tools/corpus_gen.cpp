// Writes the self-contained synthetic corpus (gradients, checkerboards,
// filtered noise) used for desk-scale training and the acceptance run.

#include <cstdio>

#include <CLI11.hpp>

#include "drcn/data.hpp"
#include "drcn/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Synthetic PGM/PPM corpus generator"};
    std::string out_dir;
    int count = 12, size = 180, channels = 1;
    std::uint64_t seed = 0;
    app.add_option("--out", out_dir, "output directory")->required();
    app.add_option("--count", count, "number of images (default 12)");
    app.add_option("--size", size, "image side length (default 180)");
    app.add_option("--channels", channels, "1 = gray PGM, 3 = color PPM");
    app.add_option("--seed", seed, "corpus seed");
    CLI11_PARSE(app, argc, argv);

    try {
        drcn::write_synthetic_corpus(out_dir, count, size, channels, seed);
    } catch (const drcn::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    std::printf("wrote %d %dx%d image(s) to %s\n", count, size, size, out_dir.c_str());
    return 0;
}
