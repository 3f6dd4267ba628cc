#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "proxbench/instances.hpp"

namespace proxbench {

/// Binary PRB1 layout (little endian):
///   "PRB1" u32 version u32 d u32 ndims u32 dims[ndims] u32 m u8 has_truth
///   f64 truth[n d] (if has_truth)  f64 b[m][n]
/// followed by optional tagged chunks (4-byte tag, u64 length, payload):
///   MAPS  per-measurement transform and modifier
///   QUAL  the qualitative set C_0
///   META  family, seed and noise flag
///   END   empty terminator, required once any chunk is present
/// Without MAPS every measurement uses the plain DFT matching ndims
/// (identity for ndims = 0).
inline constexpr std::uint32_t kDatasetVersion = 1;

std::vector<std::uint8_t> encode_dataset(const Instance& instance);
/// Throws FormatError naming the section that is missing or malformed.
Instance decode_dataset(const std::vector<std::uint8_t>& bytes);

void save_dataset(const Instance& instance, const std::filesystem::path& path);
Instance load_dataset(const std::filesystem::path& path);

struct DatasetHeader {
  std::uint32_t version = 0;
  std::uint32_t block_dim = 0;
  std::vector<std::size_t> dims;
  std::uint32_t measurements = 0;
  bool has_truth = false;
  std::vector<std::string> chunks;
  std::uint64_t checksum = 0;  // FNV-1a 64 over the whole file
};

DatasetHeader inspect_dataset(const std::vector<std::uint8_t>& bytes);
std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) noexcept;

}  // namespace proxbench
