#pragma once

#include "cuckoo/search.hpp"
#include "cuckoo/walk.hpp"

namespace cuckoo {

// Ghost insertion overlay (two-hash tables): with room in both bins the
// record is stored twice, each copy marked as a duplicate; with room in one
// bin it is stored normally; with both bins full a duplicate in either bin
// is removed outright (twin promoted) before the configured eviction
// policy runs.
WalkOutcome ghost_insert(Table& table, const KeyEntry& key,
                         WalkLimits walk_limits = {},
                         SearchLimits search_limits = {});

// Policy dispatch used by fills and benchmarks: routes to the configured
// eviction scheme, via ghost_insert when ghosts are enabled.
WalkOutcome insert_with_policy(Table& table, const KeyEntry& key,
                               WalkLimits walk_limits = {},
                               SearchLimits search_limits = {});

}  // namespace cuckoo
