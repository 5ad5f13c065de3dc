#include "cuckoo/table.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace cuckoo {

std::string_view policy_name(Policy p) {
  switch (p) {
    case Policy::RandomKick: return "random";
    case Policy::QueueKick: return "queue";
    case Policy::Bfs: return "bfs";
    case Policy::SortedSearch: return "sorted";
    case Policy::Hybrid: return "hybrid";
    case Policy::Rattle: return "rattle";
    case Policy::Khosla: return "khosla";
  }
  return "?";
}

std::optional<Policy> policy_from_name(std::string_view name) {
  for (Policy p : {Policy::RandomKick, Policy::QueueKick, Policy::Bfs,
                   Policy::SortedSearch, Policy::Hybrid, Policy::Rattle,
                   Policy::Khosla}) {
    if (policy_name(p) == name) return p;
  }
  return std::nullopt;
}

void validate_config(const TableConfig& cfg) {
  auto fail = [](const std::string& why) {
    throw std::invalid_argument("invalid table config: " + why);
  };
  if (cfg.num_bins < 2) fail("num_bins must be >= 2");
  if (cfg.bin_size < 1) fail("bin_size must be >= 1");
  if (cfg.num_hashes < 2) fail("num_hashes must be >= 2");
  if (cfg.num_hashes > kMaxHashes) fail("num_hashes exceeds supported max");
  if (cfg.num_hashes > cfg.num_bins)
    fail("num_hashes exceeds num_bins; distinct bins impossible");
  if (is_dary_policy(cfg.policy) && cfg.bin_size != 1)
    fail("rattle/khosla policies require bin_size = 1");
  if (cfg.ghost_enabled && cfg.num_hashes != 2)
    fail("ghost insertions require num_hashes = 2");
  if (is_search_policy(cfg.policy) &&
      cfg.bin_size * (cfg.num_hashes - 1) <= 1)
    fail("search policies require bin_size * (num_hashes - 1) > 1");
}

Table::Table(TableConfig cfg) : cfg_(cfg), rng_(cfg.rng_seed) {
  validate_config(cfg_);
  slots_.resize(cfg_.capacity());
  bins_.resize(cfg_.num_bins);
}

void Table::place(std::uint32_t bin, std::uint32_t idx, const KeyEntry& e,
                  bool duplicate) {
  Slot& s = slot(bin, idx);
  if (!s.occupied) ++occupied_;
  s.occupied = true;
  s.duplicate = duplicate;
  s.entry = e;
}

void Table::clear(std::uint32_t bin, std::uint32_t idx) {
  Slot& s = slot(bin, idx);
  if (s.occupied) --occupied_;
  s = Slot{};
}

int Table::free_slot(std::uint32_t bin) const {
  for (std::uint32_t i = 0; i < cfg_.bin_size; ++i)
    if (!slot(bin, i).occupied) return static_cast<int>(i);
  return -1;
}

int Table::duplicate_slot(std::uint32_t bin) const {
  for (std::uint32_t i = 0; i < cfg_.bin_size; ++i)
    if (slot(bin, i).occupied && slot(bin, i).duplicate)
      return static_cast<int>(i);
  return -1;
}

int Table::occupied_in_bin(std::uint32_t bin) const {
  int n = 0;
  for (std::uint32_t i = 0; i < cfg_.bin_size; ++i)
    if (slot(bin, i).occupied) ++n;
  return n;
}

int Table::find_key_in_bin(std::uint32_t bin, std::uint64_t key) const {
  for (std::uint32_t i = 0; i < cfg_.bin_size; ++i)
    if (slot(bin, i).occupied && slot(bin, i).entry.key == key)
      return static_cast<int>(i);
  return -1;
}

std::optional<std::uint64_t> Table::lookup(const KeyEntry& key) const {
  for (std::uint32_t bin : key.bins()) {
    touch_bin(bin);
    int idx = find_key_in_bin(bin, key.key);
    if (idx >= 0) return slot(bin, idx).entry.payload;
  }
  return std::nullopt;
}

bool Table::erase(const KeyEntry& key) {
  bool removed = false;
  for (std::uint32_t bin : key.bins()) {
    touch_bin(bin);
    int idx = find_key_in_bin(bin, key.key);
    if (idx >= 0) {
      clear(bin, static_cast<std::uint32_t>(idx));
      removed = true;
    }
  }
  return removed;
}

bool Table::overwrite(const KeyEntry& key, std::uint64_t payload) {
  bool found = false;
  for (std::uint32_t bin : key.bins()) {
    touch_bin(bin);
    int idx = find_key_in_bin(bin, key.key);
    if (idx >= 0) {
      slot(bin, static_cast<std::uint32_t>(idx)).entry.payload = payload;
      found = true;
    }
  }
  return found;
}

KeyEntry Table::random_entry(std::uint64_t key, std::uint64_t payload) {
  KeyEntry e;
  e.key = key;
  e.payload = payload;
  e.hash_count = static_cast<std::uint8_t>(cfg_.num_hashes);
  for (std::uint32_t i = 0; i < cfg_.num_hashes; ++i) {
    for (;;) {
      std::uint32_t h = rng_.below32(cfg_.num_bins);
      bool dup = false;
      for (std::uint32_t j = 0; j < i; ++j)
        if (e.hashes[j] == h) dup = true;
      if (!dup) {
        e.hashes[i] = h;
        break;
      }
    }
  }
  return e;
}

HashFamily default_hash_family(std::uint64_t seed) {
  return [seed](std::uint64_t key, std::uint32_t fn_index,
                std::uint32_t salt) {
    SplitMix64 sm{key ^ mix_seed(seed, (std::uint64_t{fn_index} << 32) | salt)};
    return sm.next();
  };
}

KeyEntry hashed_entry(std::uint64_t key, std::uint64_t payload,
                      const TableConfig& cfg, const HashFamily& family) {
  KeyEntry e;
  e.key = key;
  e.payload = payload;
  e.hash_count = static_cast<std::uint8_t>(cfg.num_hashes);
  for (std::uint32_t i = 0; i < cfg.num_hashes; ++i) {
    std::uint32_t salt = 0;
    for (;;) {
      std::uint32_t h =
          static_cast<std::uint32_t>(family(key, i, salt) % cfg.num_bins);
      bool dup = false;
      for (std::uint32_t j = 0; j < i; ++j)
        if (e.hashes[j] == h) dup = true;
      if (!dup) {
        e.hashes[i] = h;
        break;
      }
      ++salt;
    }
  }
  return e;
}

}  // namespace cuckoo
