#include "cuckoo/policy.hpp"

#include <stdexcept>

#include "cuckoo/dary.hpp"

namespace cuckoo {

namespace {

WalkOutcome dispatch_eviction(Table& table, const KeyEntry& key,
                              WalkLimits walk_limits,
                              SearchLimits search_limits) {
  switch (table.config().policy) {
    case Policy::RandomKick:
      // single-slot tables with d hash functions use the scanning d-ary
      // walk; binned tables use the two-bin walk
      if (table.bin_size() == 1 && table.num_hashes() > 2)
        return insert_random_dary(table, key, walk_limits);
      return insert_random_kick(table, key, walk_limits);
    case Policy::QueueKick:
      return insert_queue_kick(table, key, walk_limits);
    case Policy::Bfs:
      return insert_search(table, key, FrontierOrder::Fifo, search_limits);
    case Policy::SortedSearch:
      return insert_search(table, key, FrontierOrder::SpawnCount,
                           search_limits);
    case Policy::Hybrid:
      return insert_search(table, key, FrontierOrder::DepthThenSpawnCount,
                           search_limits);
    case Policy::Rattle:
      return insert_rattle(table, key, walk_limits);
    case Policy::Khosla:
      return insert_khosla(table, key, walk_limits);
  }
  throw std::logic_error("unknown policy");
}

}  // namespace

WalkOutcome ghost_insert(Table& table, const KeyEntry& key,
                         WalkLimits walk_limits, SearchLimits search_limits) {
  if (!table.config().ghost_enabled || key.hash_count != 2)
    throw std::logic_error("ghost_insert requires ghosts and two hashes");

  const std::uint32_t b0 = key.hashes[0];
  const std::uint32_t b1 = key.hashes[1];
  const int f0 = table.free_slot(b0);
  const int f1 = table.free_slot(b1);

  if (f0 >= 0 && f1 >= 0) {
    // Room in both bins: store both copies as duplicates. Both bins were
    // fetched once, so bins_viewed stays 2.
    WalkOutcome out;
    table.touch_bin(b0);
    table.touch_bin(b1);
    out.metrics.bins_viewed = 2;
    auto pick_slot = [&](std::uint32_t bin) -> std::uint32_t {
      if (table.config().policy == Policy::QueueKick) {
        BinMeta& meta = table.bin_meta(bin);
        meta.hit_counter = static_cast<std::uint8_t>(meta.hit_counter + 1);
        std::uint32_t s = meta.hit_counter % table.bin_size();
        if (!table.slot(bin, s).occupied) return s;
      }
      return static_cast<std::uint32_t>(table.free_slot(bin));
    };
    std::uint32_t s0 = pick_slot(b0);
    table.place(b0, s0, key, /*duplicate=*/true);
    std::uint32_t s1 = pick_slot(b1);
    table.place(b1, s1, key, /*duplicate=*/true);
    out.steps.push_back({b0, s0, std::nullopt, false});
    out.twin = std::make_pair(b1, s1);
    return out;
  }

  if (f0 < 0 && f1 < 0) {
    // Both bins full: a duplicate in either bin is free fodder.
    for (std::uint32_t bin : {b0, b1}) {
      int d = table.duplicate_slot(bin);
      if (d < 0) continue;
      const KeyEntry ghost = table.slot(bin, d).entry;
      promote_duplicate(table, ghost, ghost.other_bin(bin));
      table.place(bin, static_cast<std::uint32_t>(d), key);
      WalkOutcome out;
      table.touch_bin(b0);
      table.touch_bin(b1);
      out.metrics.bins_viewed = 2;
      out.steps.push_back(
          {bin, static_cast<std::uint32_t>(d), std::nullopt, true});
      return out;
    }
  }

  // One free bin (normal single placement) or a full table without root
  // duplicates: the configured policy takes over. Walks and searches both
  // treat duplicates as chain terminals.
  return dispatch_eviction(table, key, walk_limits, search_limits);
}

WalkOutcome insert_with_policy(Table& table, const KeyEntry& key,
                               WalkLimits walk_limits,
                               SearchLimits search_limits) {
  if (table.config().ghost_enabled)
    return ghost_insert(table, key, walk_limits, search_limits);
  return dispatch_eviction(table, key, walk_limits, search_limits);
}

}  // namespace cuckoo
