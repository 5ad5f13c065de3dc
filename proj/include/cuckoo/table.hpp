#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cuckoo/rng.hpp"
#include "cuckoo/types.hpp"

namespace cuckoo {

// Single-threaded bucketized cuckoo table: num_bins bins of bin_size slots.
// Insertion policies live in walk.hpp / search.hpp / dary.hpp; this class
// owns storage, per-bin counters, the seeded RNG, and the non-evicting
// operations (lookup, erase, overwrite).
class Table {
 public:
  explicit Table(TableConfig cfg);

  const TableConfig& config() const { return cfg_; }
  std::uint32_t num_bins() const { return cfg_.num_bins; }
  std::uint32_t bin_size() const { return cfg_.bin_size; }
  std::uint32_t num_hashes() const { return cfg_.num_hashes; }
  std::uint64_t capacity() const { return cfg_.capacity(); }
  std::uint64_t occupied() const { return occupied_; }
  double density() const {
    return static_cast<double>(occupied_) / static_cast<double>(capacity());
  }

  Slot& slot(std::uint32_t bin, std::uint32_t idx) {
    return slots_[std::uint64_t{bin} * cfg_.bin_size + idx];
  }
  const Slot& slot(std::uint32_t bin, std::uint32_t idx) const {
    return slots_[std::uint64_t{bin} * cfg_.bin_size + idx];
  }
  BinMeta& bin_meta(std::uint32_t bin) { return bins_[bin]; }
  const BinMeta& bin_meta(std::uint32_t bin) const { return bins_[bin]; }

  Rng& rng() { return rng_; }

  // Bin-fetch instrumentation. Policies call touch_bin once per bin fetch;
  // tests assert fetch counts (e.g. lookup touches at most H bins).
  void touch_bin(std::uint32_t /*bin*/) const { ++bin_fetches_; }
  std::uint64_t bin_fetches() const { return bin_fetches_; }
  void reset_bin_fetches() const { bin_fetches_ = 0; }

  // Lifetime spawn accounting for search policies. The per-bin counter
  // saturates at 255; the table-wide total is exact.
  void note_spawn(std::uint32_t bin) {
    if (bins_[bin].spawn_count < 255) ++bins_[bin].spawn_count;
    ++total_spawns_;
  }
  std::uint64_t total_spawns() const { return total_spawns_; }

  void place(std::uint32_t bin, std::uint32_t idx, const KeyEntry& e,
             bool duplicate = false);
  void clear(std::uint32_t bin, std::uint32_t idx);

  // First free / first duplicate slot index in a bin, or -1.
  int free_slot(std::uint32_t bin) const;
  int duplicate_slot(std::uint32_t bin) const;
  int occupied_in_bin(std::uint32_t bin) const;
  int find_key_in_bin(std::uint32_t bin, std::uint64_t key) const;

  // Scans only the bins in key.bins(); returns the payload of the first
  // copy found (ghost tables may hold two equal-payload copies).
  std::optional<std::uint64_t> lookup(const KeyEntry& key) const;

  // Removes every copy of the key (both ghost copies when duplicated).
  bool erase(const KeyEntry& key);

  // Updates the payload of every copy; true iff the key was present.
  bool overwrite(const KeyEntry& key, std::uint64_t payload);

  // Fresh key with uniformly random pairwise-distinct bin indices drawn
  // from the table RNG (the experimental hashing mode).
  KeyEntry random_entry(std::uint64_t key, std::uint64_t payload);

 private:
  TableConfig cfg_;
  Rng rng_;
  std::vector<Slot> slots_;
  std::vector<BinMeta> bins_;
  std::uint64_t occupied_ = 0;
  std::uint64_t total_spawns_ = 0;
  mutable std::uint64_t bin_fetches_ = 0;
};

// Derives bin indices for a real key from a seeded hash family,
// re-salting until the num_hashes indices are pairwise distinct.
using HashFamily = std::function<std::uint64_t(
    std::uint64_t key, std::uint32_t fn_index, std::uint32_t salt)>;

HashFamily default_hash_family(std::uint64_t seed);

KeyEntry hashed_entry(std::uint64_t key, std::uint64_t payload,
                      const TableConfig& cfg, const HashFamily& family);

}  // namespace cuckoo
