#include "regada/io/checkpoint.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <set>

namespace regada::io {

namespace {

constexpr char kMagic[4] = {'R', 'G', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_int(std::istream& is, const std::string& ctx, const char* field) {
  T v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) throw FormatError(ctx + ": truncated while reading " + field);
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const CheckpointData& data) {
  NamedRecords sorted = data.tensors;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  const std::string meta = data.meta.dump();
  write_u64(os, meta.size());
  os.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  write_u32(os, static_cast<std::uint32_t>(sorted.size()));
  for (auto& [name, rec] : sorted) {
    write_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    TensorRecord r = rec;
    r.dtype = DType::f64;
    write_record(os, r);
  }
  if (!os) throw FormatError(path.string() + ": write failed");
}

CheckpointData load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  const std::string ctx = path.string();
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(ctx + ": bad magic at offset 0 (expected RGCK)");
  }
  const auto version = read_int<std::uint32_t>(is, ctx, "version");
  if (version != kVersion) {
    throw FormatError(ctx + ": unsupported version " + std::to_string(version));
  }
  const auto meta_len = read_int<std::uint64_t>(is, ctx, "metadata length");
  std::string meta(meta_len, '\0');
  is.read(meta.data(), static_cast<std::streamsize>(meta_len));
  if (!is) throw FormatError(ctx + ": truncated metadata");
  CheckpointData data;
  try {
    data.meta = nlohmann::ordered_json::parse(meta);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(ctx + ": metadata is not valid JSON: " + e.what());
  }
  const auto count = read_int<std::uint32_t>(is, ctx, "tensor count");
  std::set<std::string> seen;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name_len = read_int<std::uint32_t>(is, ctx, "name length");
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    if (!is) throw FormatError(ctx + ": truncated tensor name");
    if (!seen.insert(name).second) {
      throw FormatError(ctx + ": duplicate tensor '" + name + "'");
    }
    data.tensors.emplace_back(name, read_record(is, ctx + ":" + name));
  }
  is.peek();
  if (!is.eof()) {
    throw FormatError(ctx + ": trailing bytes after last tensor");
  }
  return data;
}

std::uint64_t config_hash(std::string_view canonical_json) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : canonical_json) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace regada::io
