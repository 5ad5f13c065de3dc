#include "cuckoo/walk.hpp"

#include <stdexcept>

namespace cuckoo {

namespace {

// Uniform pick among the key's bins excluding `exclude` (pass a value no
// bin can take, e.g. num_bins, to allow all).
std::uint32_t random_other_bin(Rng& rng, const KeyEntry& key,
                               std::uint32_t exclude) {
  std::uint32_t pool[kMaxHashes];
  std::uint32_t n = 0;
  for (std::uint32_t b : key.bins())
    if (b != exclude) pool[n++] = b;
  return pool[rng.below32(n)];
}

}  // namespace

std::uint32_t choose_insert_bin(Table& table, const KeyEntry& key) {
  const auto bins = key.bins();
  for (std::uint32_t b : bins) table.touch_bin(b);

  std::uint32_t best = 0;
  bool have_free = false;
  int best_occ = 0;
  for (std::uint32_t b : bins) {
    if (table.free_slot(b) < 0) continue;
    int occ = table.occupied_in_bin(b);
    if (!have_free || occ < best_occ ||
        (occ == best_occ &&
         (table.bin_meta(b).hit_counter < table.bin_meta(best).hit_counter ||
          (table.bin_meta(b).hit_counter == table.bin_meta(best).hit_counter &&
           b < best)))) {
      best = b;
      best_occ = occ;
      have_free = true;
    }
  }
  if (have_free) return best;

  if (table.config().policy == Policy::QueueKick) {
    best = bins[0];
    for (std::uint32_t b : bins)
      if (table.bin_meta(b).hit_counter < table.bin_meta(best).hit_counter ||
          (table.bin_meta(b).hit_counter == table.bin_meta(best).hit_counter &&
           b < best))
        best = b;
    return best;
  }
  return bins[table.rng().below32(static_cast<std::uint32_t>(bins.size()))];
}

namespace {

// Shared walk skeleton. The placement rule is what distinguishes random
// kicking from queue-kicking:
//  - random: free slot if any, else evict a uniformly random slot;
//  - queue:  bump the hit counter and take slot (counter mod B),
//            displacing any occupant.
// With ghosts enabled, a full bin containing a duplicate terminates the
// walk: the duplicate is removed (its twin promoted) and the incoming key
// takes the freed slot.
WalkOutcome walk_insert(Table& table, const KeyEntry& key, bool queue,
                        WalkLimits limits) {
  WalkOutcome out;
  const bool ghosts = table.config().ghost_enabled;
  const std::uint32_t bin_size = table.bin_size();

  std::uint32_t bin = choose_insert_bin(table, key);
  out.metrics.bins_viewed = key.hash_count;

  KeyEntry cur = key;
  for (;;) {
    const bool full = table.free_slot(bin) < 0;

    if (ghosts && full) {
      int dup = table.duplicate_slot(bin);
      if (dup >= 0) {
        const KeyEntry ghost = table.slot(bin, dup).entry;
        if (out.metrics.chain_length >= 1)
          out.terminal_prechain_duplicate = true;
        promote_duplicate(table, ghost, ghost.other_bin(bin));
        table.place(bin, static_cast<std::uint32_t>(dup), cur);
        out.steps.push_back({bin, static_cast<std::uint32_t>(dup),
                             std::nullopt, /*promoted_duplicate=*/true});
        return out;
      }
    }

    std::uint32_t slot_idx;
    if (queue) {
      BinMeta& meta = table.bin_meta(bin);
      meta.hit_counter = static_cast<std::uint8_t>(meta.hit_counter + 1);
      slot_idx = meta.hit_counter % bin_size;
    } else {
      int fs = table.free_slot(bin);
      slot_idx = fs >= 0 ? static_cast<std::uint32_t>(fs)
                         : table.rng().below32(bin_size);
    }

    Slot& target = table.slot(bin, slot_idx);
    if (!target.occupied) {
      if (out.metrics.chain_length >= 1)
        out.terminal_prechain_duplicate = table.duplicate_slot(bin) >= 0;
      table.place(bin, slot_idx, cur);
      out.steps.push_back({bin, slot_idx, std::nullopt, false});
      return out;
    }

    // Kick-out.
    if (out.metrics.chain_length >= limits.max_steps) {
      out.success = false;
      out.homeless = cur;
      return out;
    }
    KeyEntry victim = target.entry;
    table.place(bin, slot_idx, cur);
    out.steps.push_back({bin, slot_idx, victim, false});
    ++out.metrics.chain_length;

    cur = victim;
    bin = cur.hash_count == 2 ? cur.other_bin(bin)
                              : random_other_bin(table.rng(), cur, bin);
    table.touch_bin(bin);
    ++out.metrics.bins_viewed;
  }
}

}  // namespace

WalkOutcome insert_random_kick(Table& table, const KeyEntry& key,
                               WalkLimits limits) {
  return walk_insert(table, key, /*queue=*/false, limits);
}

WalkOutcome insert_queue_kick(Table& table, const KeyEntry& key,
                              WalkLimits limits) {
  return walk_insert(table, key, /*queue=*/true, limits);
}

void promote_duplicate(Table& table, const KeyEntry& key,
                       std::uint32_t surviving_bin) {
  int survive_idx = -1;
  int other_idx = -1;
  std::uint32_t other_bin = 0;
  for (std::uint32_t b : key.bins()) {
    int idx = table.find_key_in_bin(b, key.key);
    if (idx < 0) continue;
    if (b == surviving_bin) {
      survive_idx = idx;
    } else {
      other_bin = b;
      other_idx = idx;
    }
  }
  if (survive_idx < 0 || other_idx < 0 ||
      !table.slot(surviving_bin, survive_idx).duplicate ||
      !table.slot(other_bin, other_idx).duplicate) {
    throw std::logic_error("promote_duplicate: key is not duplicated");
  }
  table.slot(surviving_bin, static_cast<std::uint32_t>(survive_idx))
      .duplicate = false;
  table.clear(other_bin, static_cast<std::uint32_t>(other_idx));
}

}  // namespace cuckoo
