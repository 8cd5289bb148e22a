#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "drcn/model.hpp"
#include "drcn/optim.hpp"

namespace drcn {

// Checkpoint file: fixed little-endian binary, bit-exact roundtrip.
//   "DRCN" magic, u32 version, length-prefixed canonical JSON config,
//   u64 epoch, u64 master seed, u8 optimizer flag, parameter tensors in
//   collect_state order as raw f64, optional Adam state, trailing FNV-1a64
//   checksum. Full layout in docs/formats.md.

struct Checkpoint {
    Model model;  // loaded in infer mode
    std::optional<AdamState> optimizer;
    std::uint64_t epoch = 0;
    std::uint64_t master_seed = 0;
};

void save_checkpoint(Model& model, const AdamState* optimizer,
                     std::uint64_t epoch, std::uint64_t master_seed,
                     const std::string& path);

/// Throws ParseError (bad magic / version / truncation / checksum) or
/// IoError (unreadable file), each with a distinct message.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace drcn
