#include "cuckoo/dary.hpp"

#include <algorithm>
#include <stdexcept>

namespace cuckoo {

namespace {

void require_single_slot(const Table& table) {
  if (table.bin_size() != 1)
    throw std::logic_error("d-ary insertion requires bin_size = 1");
}

}  // namespace

Table make_dary_table(std::uint32_t num_bins, std::uint32_t d, Policy policy,
                      std::uint64_t seed) {
  TableConfig cfg;
  cfg.num_bins = num_bins;
  cfg.bin_size = 1;
  cfg.num_hashes = d;
  cfg.policy = policy;
  cfg.rng_seed = seed;
  return Table(cfg);
}

WalkOutcome insert_rattle(Table& table, const KeyEntry& key,
                          WalkLimits limits) {
  require_single_slot(table);
  WalkOutcome out;
  const std::uint32_t d = key.hash_count;
  const std::uint64_t attempt_cap = std::uint64_t{limits.max_steps} * 8;

  KeyEntry cur = key;
  for (;;) {
    const std::uint32_t bin = cur.hashes[cur.rattle % d];
    table.touch_bin(bin);
    ++out.metrics.bins_viewed;

    Slot& s = table.slot(bin, 0);
    if (!s.occupied) {
      table.place(bin, 0, cur);
      out.steps.push_back({bin, 0, std::nullopt, false});
      return out;
    }
    if (cur.rattle > s.entry.rattle) {
      // Incumbent loses the contest: its counter advances and it rattles
      // on to its next hash.
      if (out.metrics.chain_length >= limits.max_steps) {
        out.success = false;
        out.homeless = cur;
        return out;
      }
      KeyEntry victim = s.entry;
      ++victim.rattle;
      table.place(bin, 0, cur);
      out.steps.push_back({bin, 0, victim, false});
      ++out.metrics.chain_length;
      cur = victim;
    } else {
      // Incumbent stays (ties included); the incoming key advances.
      ++cur.rattle;
    }
    if (out.metrics.bins_viewed >= attempt_cap) {
      out.success = false;
      out.homeless = cur;
      return out;
    }
  }
}

WalkOutcome insert_khosla(Table& table, const KeyEntry& key,
                          WalkLimits limits) {
  require_single_slot(table);
  WalkOutcome out;

  KeyEntry cur = key;
  for (;;) {
    // Read every candidate label; pick the smallest, empty bins winning
    // ties, then the lowest bin index.
    std::uint32_t best = cur.hashes[0];
    for (std::uint32_t b : cur.bins()) {
      table.touch_bin(b);
      ++out.metrics.bins_viewed;
      const std::uint32_t lb = table.bin_meta(b).khosla_label;
      const std::uint32_t lbest = table.bin_meta(best).khosla_label;
      const bool occ_b = table.slot(b, 0).occupied;
      const bool occ_best = table.slot(best, 0).occupied;
      if (lb < lbest || (lb == lbest && occ_b < occ_best) ||
          (lb == lbest && occ_b == occ_best && b < best))
        best = b;
    }
    // Every placement re-labels the chosen bin with the local-search
    // estimate: one more than the cheapest alternative bin of the key
    // being placed. Labels only grow (the chosen bin held the minimum).
    std::uint32_t min_other = 0xffffffffu;
    for (std::uint32_t b : cur.bins())
      if (b != best)
        min_other = std::min(min_other, table.bin_meta(b).khosla_label);

    Slot& s = table.slot(best, 0);
    if (!s.occupied) {
      table.bin_meta(best).khosla_label = min_other + 1;
      table.place(best, 0, cur);
      out.steps.push_back({best, 0, std::nullopt, false});
      return out;
    }
    if (out.metrics.chain_length >= limits.max_steps) {
      out.success = false;
      out.homeless = cur;
      return out;
    }
    KeyEntry victim = s.entry;
    table.bin_meta(best).khosla_label = min_other + 1;
    table.place(best, 0, cur);
    out.steps.push_back({best, 0, victim, false});
    ++out.metrics.chain_length;
    cur = victim;
  }
}

WalkOutcome insert_random_dary(Table& table, const KeyEntry& key,
                               WalkLimits limits) {
  require_single_slot(table);
  WalkOutcome out;

  KeyEntry cur = key;
  // No previous bin for the initial placement; num_bins is outside the
  // valid index range.
  std::uint32_t prev = table.num_bins();
  for (;;) {
    int placed = -1;
    for (std::uint32_t b : cur.bins()) {
      if (b == prev) continue;
      table.touch_bin(b);
      ++out.metrics.bins_viewed;
      if (!table.slot(b, 0).occupied) {
        placed = static_cast<int>(b);
        break;
      }
    }
    if (placed >= 0) {
      table.place(static_cast<std::uint32_t>(placed), 0, cur);
      out.steps.push_back(
          {static_cast<std::uint32_t>(placed), 0, std::nullopt, false});
      return out;
    }
    if (out.metrics.chain_length >= limits.max_steps) {
      out.success = false;
      out.homeless = cur;
      return out;
    }
    std::uint32_t pool[kMaxHashes];
    std::uint32_t n = 0;
    for (std::uint32_t b : cur.bins())
      if (b != prev) pool[n++] = b;
    const std::uint32_t bin = pool[table.rng().below32(n)];
    KeyEntry victim = table.slot(bin, 0).entry;
    table.place(bin, 0, cur);
    out.steps.push_back({bin, 0, victim, false});
    ++out.metrics.chain_length;
    cur = victim;
    prev = bin;
  }
}

double mean_hashes_used(const Table& table) {
  std::uint64_t sum = 0;
  std::uint64_t count = 0;
  const std::uint32_t d = table.num_hashes();
  for (std::uint32_t b = 0; b < table.num_bins(); ++b) {
    for (std::uint32_t s = 0; s < table.bin_size(); ++s) {
      const Slot& sl = table.slot(b, s);
      if (!sl.occupied) continue;
      sum += std::min<std::uint64_t>(sl.entry.rattle + 1, d);
      ++count;
    }
  }
  return count == 0 ? 0.0 : static_cast<double>(sum) / count;
}

}  // namespace cuckoo
