#pragma once

#include <initializer_list>

#include "cuckoo/table.hpp"

namespace cuckoo::testing {

inline KeyEntry make_entry(std::uint64_t key,
                           std::initializer_list<std::uint32_t> bins,
                           std::uint64_t payload = 0) {
  KeyEntry e;
  e.key = key;
  e.payload = payload;
  e.hash_count = 0;
  for (std::uint32_t b : bins) e.hashes[e.hash_count++] = b;
  return e;
}

inline TableConfig small_config(std::uint32_t n, std::uint32_t B,
                                std::uint32_t H, Policy p,
                                bool ghosts = false,
                                std::uint64_t seed = 42) {
  TableConfig cfg;
  cfg.num_bins = n;
  cfg.bin_size = B;
  cfg.num_hashes = H;
  cfg.policy = p;
  cfg.ghost_enabled = ghosts;
  cfg.rng_seed = seed;
  return cfg;
}

}  // namespace cuckoo::testing
