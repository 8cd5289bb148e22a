#include "drcn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "drcn/config.hpp"

// Checkpoint layout (all integers little-endian):
//   bytes 0..3   magic "DRCN"
//   u32          format version (1)
//   u32          config length, followed by that many bytes of canonical
//                (key-sorted, compact) JSON for the ModelConfig
//   u64          epoch counter
//   u64          master seed
//   u8           1 if optimizer state follows the tensors, else 0
//   f64[]        model state in collect_state order (learnables, then BN
//                running statistics)
//   [optimizer]  u64 step count t, then per parameter m then v as f64[]
//   u64          FNV-1a 64 checksum of every preceding byte

namespace drcn {

namespace {

constexpr char kMagic[4] = {'D', 'R', 'C', 'N'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

std::uint64_t fnv1a64(const unsigned char* data, std::size_t n) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        hash ^= data[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

class Writer {
public:
    void raw(const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }
    void u8(std::uint8_t v) { raw(&v, 1); }
    void u32(std::uint32_t v) { raw(&v, 4); }
    void u64(std::uint64_t v) { raw(&v, 8); }
    void doubles(const double* p, std::int64_t n) {
        raw(p, static_cast<std::size_t>(n) * sizeof(double));
    }
    std::vector<unsigned char>& bytes() { return buf_; }

private:
    std::vector<unsigned char> buf_;
};

class Reader {
public:
    Reader(const unsigned char* data, std::size_t n, std::string path)
        : data_(data), size_(n), path_(std::move(path)) {}

    void raw(void* out, std::size_t n) {
        if (pos_ + n > size_) {
            throw ParseError("checkpoint '" + path_ + "' is truncated: need " +
                             std::to_string(n) + " bytes at offset " +
                             std::to_string(pos_) + ", file has " +
                             std::to_string(size_));
        }
        std::memcpy(out, data_ + pos_, n);
        pos_ += n;
    }
    std::uint8_t u8() { std::uint8_t v; raw(&v, 1); return v; }
    std::uint32_t u32() { std::uint32_t v; raw(&v, 4); return v; }
    std::uint64_t u64() { std::uint64_t v; raw(&v, 8); return v; }
    void doubles(double* out, std::int64_t n) {
        raw(out, static_cast<std::size_t>(n) * sizeof(double));
    }
    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return size_ - pos_; }
    const std::string& path() const { return path_; }

private:
    const unsigned char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
    std::string path_;
};

}  // namespace

void save_checkpoint(Model& model, const AdamState* optimizer,
                     std::uint64_t epoch, std::uint64_t master_seed,
                     const std::string& path) {
    Writer w;
    w.raw(kMagic, 4);
    w.u32(kVersion);

    const std::string config_text = model_config_to_json(model.config).dump();
    w.u32(static_cast<std::uint32_t>(config_text.size()));
    w.raw(config_text.data(), config_text.size());

    w.u64(epoch);
    w.u64(master_seed);
    w.u8(optimizer ? 1 : 0);

    for (const auto& ref : collect_state(model)) w.doubles(ref.data, ref.size);

    if (optimizer) {
        const auto params = collect_params(model);
        if (optimizer->m.size() != params.size()) {
            throw ShapeError("optimizer state does not match model parameters");
        }
        w.u64(optimizer->t);
        for (std::size_t i = 0; i < params.size(); ++i) {
            w.doubles(optimizer->m[i].data(), params[i].size);
            w.doubles(optimizer->v[i].data(), params[i].size);
        }
    }

    w.u64(fnv1a64(w.bytes().data(), w.bytes().size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(w.bytes().data()),
              static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw IoError("failed while writing checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed while reading checkpoint '" + path + "'");

    Reader r(bytes.data(), bytes.size(), path);

    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw ParseError("'" + path + "' is not a checkpoint: expected magic \"DRCN\" "
                         "at offset 0");
    }
    const std::uint32_t version = r.u32();
    if (version != kVersion) {
        throw ParseError("checkpoint '" + path + "' has format version " +
                         std::to_string(version) + ", this build reads version " +
                         std::to_string(kVersion));
    }

    const std::uint32_t config_len = r.u32();
    std::string config_text(config_len, '\0');
    r.raw(config_text.data(), config_len);
    nlohmann::json config_json;
    try {
        config_json = nlohmann::json::parse(config_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("checkpoint '" + path + "' has a corrupt config block: " +
                         e.what());
    }

    Checkpoint ckpt;
    // build_model gives the right geometry; every tensor is overwritten below.
    ckpt.model = build_model(model_config_from_json(config_json), 0);
    ckpt.model.mode = Mode::infer;
    ckpt.epoch = r.u64();
    ckpt.master_seed = r.u64();
    const bool has_optimizer = r.u8() != 0;

    for (const auto& ref : collect_state(ckpt.model)) r.doubles(ref.data, ref.size);

    if (has_optimizer) {
        auto params = collect_params(ckpt.model);
        AdamState state = AdamState::for_params(params);
        state.t = r.u64();
        for (std::size_t i = 0; i < params.size(); ++i) {
            r.doubles(state.m[i].data(), params[i].size);
            r.doubles(state.v[i].data(), params[i].size);
        }
        ckpt.optimizer = std::move(state);
    }

    if (r.remaining() < sizeof(std::uint64_t)) {
        throw ParseError("checkpoint '" + path + "' is truncated: only " +
                         std::to_string(r.remaining()) +
                         " bytes left where the 8-byte checksum belongs");
    }
    if (r.remaining() > sizeof(std::uint64_t)) {
        throw ParseError("checkpoint '" + path + "' has " +
                         std::to_string(r.remaining() - 8) +
                         " unexpected trailing bytes after the checksum");
    }
    const std::uint64_t stored = r.u64();
    const std::uint64_t actual = fnv1a64(bytes.data(), bytes.size() - 8);
    if (stored != actual) {
        throw ParseError("checkpoint '" + path + "' checksum mismatch: file is corrupt");
    }
    return ckpt;
}

}  // namespace drcn
