#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "regada/errors.hpp"

namespace regada::io {

// Binary tensor container, little-endian:
//   bytes 0-3   magic "RGDF"
//   u32         version (1)
//   u32         dtype code: 1 = 32-bit float, 2 = 64-bit float
//   u32         rank (1..8)
//   rank x u32  dims, each >= 1
//   payload     row-major values
// Feature and embedding files carry dtype 1; checkpoint tensors carry
// dtype 2 so that optimizer state round-trips exactly.
enum class DType : std::uint32_t { f32 = 1, f64 = 2 };

struct TensorRecord {
  std::vector<std::size_t> shape;
  std::vector<double> values;  // upcast on load
  DType dtype = DType::f32;
};

// Single-record RGDF stream I/O. Readers reject bad magic, unknown
// versions/dtypes, truncated payloads and non-finite values, naming the
// byte offset (or element index) of the first offender.
void write_record(std::ostream& os, const TensorRecord& rec);
TensorRecord read_record(std::istream& is, const std::string& context);

// Standalone .rgdf file: exactly one record, no trailing bytes.
void write_tensor_file(const std::filesystem::path& path, const TensorRecord& rec);
TensorRecord read_tensor_file(const std::filesystem::path& path);

// Named-tensor dictionary, magic "RGDT": u32 version (1), u32 count, then
// per entry u32 name length, name bytes, one RGDF record. Names unique.
using NamedRecords = std::vector<std::pair<std::string, TensorRecord>>;

void write_dict_file(const std::filesystem::path& path, const NamedRecords& entries);
NamedRecords read_dict_file(const std::filesystem::path& path);

}  // namespace regada::io
