#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace cuckoo {

// Upper bound on hash functions per key; experiments use 2 (binned tables)
// or 4 (d-ary tables).
inline constexpr std::uint32_t kMaxHashes = 8;

enum class Policy : std::uint8_t {
  RandomKick,
  QueueKick,
  Bfs,
  SortedSearch,
  Hybrid,
  Rattle,
  Khosla,
};

std::string_view policy_name(Policy p);
std::optional<Policy> policy_from_name(std::string_view name);

inline bool is_dary_policy(Policy p) {
  return p == Policy::Rattle || p == Policy::Khosla;
}
inline bool is_search_policy(Policy p) {
  return p == Policy::Bfs || p == Policy::SortedSearch || p == Policy::Hybrid;
}

struct TableConfig {
  std::uint32_t num_bins = 0;    // n
  std::uint32_t bin_size = 0;    // B, slots per bin
  std::uint32_t num_hashes = 2;  // H (d for single-slot tables)
  Policy policy = Policy::RandomKick;
  bool ghost_enabled = false;
  std::uint64_t rng_seed = 0;

  std::uint64_t capacity() const {
    return std::uint64_t{num_bins} * bin_size;
  }
};

// Throws std::invalid_argument when a config invariant is violated.
void validate_config(const TableConfig& cfg);

struct KeyEntry {
  std::uint64_t key = 0;
  std::uint64_t payload = 0;
  std::array<std::uint32_t, kMaxHashes> hashes{};
  std::uint8_t hash_count = 0;
  // d-ary rattle counter; never decremented.
  std::uint32_t rattle = 0;

  std::span<const std::uint32_t> bins() const {
    return {hashes.data(), hash_count};
  }

  bool hashes_to(std::uint32_t bin) const {
    for (std::uint32_t i = 0; i < hash_count; ++i)
      if (hashes[i] == bin) return true;
    return false;
  }

  // The bin other than `current`; only meaningful for two-hash keys.
  std::uint32_t other_bin(std::uint32_t current) const {
    return hashes[0] == current ? hashes[1] : hashes[0];
  }
};

struct Slot {
  bool occupied = false;
  bool duplicate = false;  // ghost copy marker
  KeyEntry entry;
};

// Per-bin counters. hit_counter wraps mod 256 (only its value mod B is
// used); spawn_count saturates at 255.
struct BinMeta {
  std::uint8_t hit_counter = 0;
  std::uint8_t spawn_count = 0;
  std::uint32_t khosla_label = 0;
};

struct OpMetrics {
  std::uint64_t bins_viewed = 0;
  std::uint64_t chain_length = 0;
  std::uint64_t spawns = 0;
};

}  // namespace cuckoo
