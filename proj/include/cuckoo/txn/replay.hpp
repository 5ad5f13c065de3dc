#pragma once

#include <vector>

#include "cuckoo/txn/engine.hpp"

namespace cuckoo::txn {

// Serializability oracle: replays the commit log in transaction-ID order
// against an empty model table and compares the result with the engine's
// live slots. The engine must have been built with record_commits.
bool replay_matches(const TxnEngine& engine);

// No committed transaction read a cell version stamped by a transaction
// with a greater ID.
bool dependency_direction_ok(const std::vector<CommitRecord>& log);

// Commits sharing a transaction ID never touch the same cell, so any
// order among ties yields the same final table.
bool tied_commits_disjoint(const std::vector<CommitRecord>& log);

}  // namespace cuckoo::txn
