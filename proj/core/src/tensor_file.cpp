#include "regada/io/tensor_file.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

namespace regada::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "file formats assume a little-endian host");

constexpr char kTensorMagic[4] = {'R', 'G', 'D', 'F'};
constexpr char kDictMagic[4] = {'R', 'G', 'D', 'T'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kMaxRank = 8;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& is, const std::string& ctx, const char* field) {
  std::uint32_t v = 0;
  const auto at = is.tellg();
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!is) {
    throw FormatError(ctx + ": truncated while reading " + field + " at offset " +
                      std::to_string(static_cast<long long>(at)));
  }
  return v;
}

}  // namespace

void write_record(std::ostream& os, const TensorRecord& rec) {
  if (rec.shape.empty() || rec.shape.size() > kMaxRank) {
    throw FormatError("tensor record: rank must be in [1," + std::to_string(kMaxRank) +
                      "], got " + std::to_string(rec.shape.size()));
  }
  std::size_t count = 1;
  for (std::size_t d : rec.shape) {
    if (d == 0) throw FormatError("tensor record: zero extent");
    count *= d;
  }
  if (count != rec.values.size()) {
    throw FormatError("tensor record: value count does not match shape");
  }
  os.write(kTensorMagic, 4);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(rec.dtype));
  write_u32(os, static_cast<std::uint32_t>(rec.shape.size()));
  for (std::size_t d : rec.shape) write_u32(os, static_cast<std::uint32_t>(d));
  if (rec.dtype == DType::f32) {
    std::vector<float> buf(rec.values.size());
    for (std::size_t i = 0; i < buf.size(); ++i)
      buf[i] = static_cast<float>(rec.values[i]);
    os.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(float)));
  } else {
    os.write(reinterpret_cast<const char*>(rec.values.data()),
             static_cast<std::streamsize>(rec.values.size() * sizeof(double)));
  }
  if (!os) throw FormatError("tensor record: write failed");
}

TensorRecord read_record(std::istream& is, const std::string& ctx) {
  char magic[4] = {};
  const auto magic_at = is.tellg();
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kTensorMagic, 4) != 0) {
    throw FormatError(ctx + ": bad magic at offset " +
                      std::to_string(static_cast<long long>(magic_at)) +
                      " (expected RGDF)");
  }
  const std::uint32_t version = read_u32(is, ctx, "version");
  if (version != kVersion) {
    throw FormatError(ctx + ": unsupported version " + std::to_string(version));
  }
  const std::uint32_t dtype = read_u32(is, ctx, "dtype");
  if (dtype != static_cast<std::uint32_t>(DType::f32) &&
      dtype != static_cast<std::uint32_t>(DType::f64)) {
    throw FormatError(ctx + ": unknown dtype code " + std::to_string(dtype));
  }
  const std::uint32_t rank = read_u32(is, ctx, "rank");
  if (rank == 0 || rank > kMaxRank) {
    throw FormatError(ctx + ": rank " + std::to_string(rank) + " out of range");
  }
  TensorRecord rec;
  rec.dtype = static_cast<DType>(dtype);
  rec.shape.resize(rank);
  std::size_t count = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    const std::uint32_t d = read_u32(is, ctx, "dims");
    if (d == 0) throw FormatError(ctx + ": zero extent in dims");
    rec.shape[i] = d;
    if (count > std::numeric_limits<std::size_t>::max() / d) {
      throw FormatError(ctx + ": dims overflow");
    }
    count *= d;
  }
  rec.values.resize(count);
  const auto payload_at = is.tellg();
  if (rec.dtype == DType::f32) {
    std::vector<float> buf(count);
    is.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (!is) {
      throw FormatError(ctx + ": truncated payload at offset " +
                        std::to_string(static_cast<long long>(payload_at)) +
                        " (wanted " + std::to_string(count * sizeof(float)) + " bytes)");
    }
    for (std::size_t i = 0; i < count; ++i) rec.values[i] = static_cast<double>(buf[i]);
  } else {
    is.read(reinterpret_cast<char*>(rec.values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!is) {
      throw FormatError(ctx + ": truncated payload at offset " +
                        std::to_string(static_cast<long long>(payload_at)) +
                        " (wanted " + std::to_string(count * sizeof(double)) + " bytes)");
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::isfinite(rec.values[i])) {
      throw FormatError(ctx + ": non-finite value at element " + std::to_string(i));
    }
  }
  return rec;
}

void write_tensor_file(const std::filesystem::path& path, const TensorRecord& rec) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  write_record(os, rec);
}

TensorRecord read_tensor_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  TensorRecord rec = read_record(is, path.string());
  is.peek();
  if (!is.eof()) {
    throw FormatError(path.string() + ": trailing bytes after payload at offset " +
                      std::to_string(static_cast<long long>(is.tellg())));
  }
  return rec;
}

void write_dict_file(const std::filesystem::path& path, const NamedRecords& entries) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  os.write(kDictMagic, 4);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(entries.size()));
  std::set<std::string> seen;
  for (const auto& [name, rec] : entries) {
    if (!seen.insert(name).second) {
      throw FormatError(path.string() + ": duplicate entry name '" + name + "'");
    }
    write_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_record(os, rec);
  }
  if (!os) throw FormatError(path.string() + ": write failed");
}

NamedRecords read_dict_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  const std::string ctx = path.string();
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kDictMagic, 4) != 0) {
    throw FormatError(ctx + ": bad magic at offset 0 (expected RGDT)");
  }
  const std::uint32_t version = read_u32(is, ctx, "version");
  if (version != kVersion) {
    throw FormatError(ctx + ": unsupported version " + std::to_string(version));
  }
  const std::uint32_t count = read_u32(is, ctx, "entry count");
  NamedRecords entries;
  entries.reserve(count);
  std::set<std::string> seen;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = read_u32(is, ctx, "name length");
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    if (!is) throw FormatError(ctx + ": truncated entry name");
    if (!seen.insert(name).second) {
      throw FormatError(ctx + ": duplicate entry name '" + name + "'");
    }
    entries.emplace_back(name, read_record(is, ctx + ":" + name));
  }
  is.peek();
  if (!is.eof()) {
    throw FormatError(ctx + ": trailing bytes after last entry at offset " +
                      std::to_string(static_cast<long long>(is.tellg())));
  }
  return entries;
}

}  // namespace regada::io
