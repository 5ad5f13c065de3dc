#pragma once

#include <optional>
#include <vector>

#include "cuckoo/table.hpp"

namespace cuckoo {

struct WalkLimits {
  std::uint32_t max_steps = 500;  // kick-out cap per insertion
};

struct WalkStep {
  std::uint32_t bin = 0;
  std::uint32_t slot = 0;
  std::optional<KeyEntry> evicted;  // displaced occupant, re-homed next step
  bool promoted_duplicate = false;  // slot was freed by removing a ghost copy
};

struct WalkOutcome {
  OpMetrics metrics;
  bool success = true;
  // One entry per placement along the applied chain; steps.size() ==
  // metrics.chain_length + 1 on success (the final placement included).
  std::vector<WalkStep> steps;
  // Set when the step cap was reached: the key left without a slot.
  std::optional<KeyEntry> homeless;
  // Ghost dual insertions record the second copy's location here.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> twin;
  // For chains of length >= 1: whether the final bin held a duplicate
  // immediately before the chain began.
  std::optional<bool> terminal_prechain_duplicate;
};

// Target-bin choice shared by the walk policies: a bin with a free slot
// wins; among free bins the less-full one (ties: smaller hit counter, then
// lower index). With every bin full, queue-kicking tables pick the smaller
// hit counter; others pick uniformly at random.
std::uint32_t choose_insert_bin(Table& table, const KeyEntry& key);

WalkOutcome insert_random_kick(Table& table, const KeyEntry& key,
                               WalkLimits limits = {});

// Queue-kicking via per-bin hit counters: every arrival increments the
// bin's counter and lands in slot (counter mod B), displacing any occupant.
WalkOutcome insert_queue_kick(Table& table, const KeyEntry& key,
                              WalkLimits limits = {});

// Unmarks the copy in surviving_bin and clears the other copy's slot.
// Throws std::logic_error unless the key is currently duplicated.
void promote_duplicate(Table& table, const KeyEntry& key,
                       std::uint32_t surviving_bin);

}  // namespace cuckoo
