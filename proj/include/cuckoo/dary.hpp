#pragma once

#include "cuckoo/walk.hpp"

namespace cuckoo {

// d-ary cuckoo hashing: single-slot bins, d hash functions per key.
// The table's KeyEntry rattle counters and per-bin khosla labels carry the
// policy state; bin_size must be 1.

Table make_dary_table(std::uint32_t num_bins, std::uint32_t d, Policy policy,
                      std::uint64_t seed);

// Rattle-kicking: a key tries bin h[r mod d]; on a collision the occupant
// with the higher rattle counter keeps the bin and the loser's counter is
// incremented before it moves on (ties keep the incumbent).
WalkOutcome insert_rattle(Table& table, const KeyEntry& key,
                          WalkLimits limits = {});

// Min-label kicking: place into the candidate bin with the smallest label
// (empty bins win ties, then lower index); an eviction bumps the chosen
// bin's label to min-candidate-label + 1. Every placement decision reads
// all d candidate labels, so each is charged d bin views.
WalkOutcome insert_khosla(Table& table, const KeyEntry& key,
                          WalkLimits limits = {});

// Random kicking baseline for single-slot tables: scan the candidate bins
// for a free slot, else evict a uniformly random candidate bin, never the
// one the key was just evicted from.
WalkOutcome insert_random_dary(Table& table, const KeyEntry& key,
                               WalkLimits limits = {});

// Mean count of distinct hash functions used by in-table records,
// min(rattle + 1, d) per record. Meaningful after rattle fills.
double mean_hashes_used(const Table& table);

}  // namespace cuckoo
