#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "regada/io/tensor_file.hpp"

namespace regada::io {

// Checkpoint file, magic "RGCK": u32 version (1), u64 metadata length,
// metadata JSON bytes, u32 tensor count, then named RGDF records (u32 name
// length, name, record). Tensors are written dtype f64 so parameters and
// optimizer state round-trip exactly; entries are sorted by name so that
// save -> load -> save is byte-identical.
struct CheckpointData {
  nlohmann::ordered_json meta;  // epoch, config, config_hash, rng_state, adam_step
  NamedRecords tensors;
};

void save_checkpoint(const std::filesystem::path& path, const CheckpointData& data);
CheckpointData load_checkpoint(const std::filesystem::path& path);

// FNV-1a 64-bit over the canonical (sorted-key) config dump; stored in the
// checkpoint and compared against the loading config.
std::uint64_t config_hash(std::string_view canonical_json);

}  // namespace regada::io
