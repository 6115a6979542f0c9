#pragma once

// On-disk cache of splitting tables keyed by (field content hash, bound).
//
// File: <dir>/splitting-<hash>-<bound>.txt
//   dedekind-splitting-table v1
//   field <hash>
//   bound <bound>
//   degree <d>
//   count <number of primes>
//   <p> <e>:<f> [<e>:<f> ...]        one line per prime, ascending
//
// Files are written to a temporary name and renamed into place.

#include <cstdint>
#include <filesystem>
#include <optional>

#include "dedekind/ideals.hpp"

namespace dedekind {

inline constexpr int kSplittingCacheVersion = 1;

std::filesystem::path splitting_cache_path(const std::filesystem::path& dir, const std::string& field_hash,
                                           std::uint64_t bound);

// nullopt on a miss, a version mismatch, or a damaged file.
std::optional<SplittingTable> load_splitting_cache(const std::filesystem::path& dir, const FieldSpec& field,
                                                   std::uint64_t bound);
void save_splitting_cache(const std::filesystem::path& dir, const SplittingTable& table);

// Cached when `dir` is non-empty; built (and stored) on a miss.
SplittingTable cached_splitting_table(const std::filesystem::path& dir, const FieldSpec& field, std::uint64_t bound,
                                      bool* hit = nullptr);

}  // namespace dedekind
