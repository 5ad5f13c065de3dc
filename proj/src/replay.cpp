#include "cuckoo/txn/replay.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cuckoo::txn {

bool replay_matches(const TxnEngine& engine) {
  std::vector<CommitRecord> log = engine.commit_log();
  std::stable_sort(log.begin(), log.end(),
                   [](const CommitRecord& a, const CommitRecord& b) {
                     return a.txn_id < b.txn_id;
                   });

  std::map<std::pair<std::uint32_t, std::uint32_t>,
           std::pair<std::uint64_t, std::uint64_t>>
      model;  // (bin, slot) -> (key, payload)
  for (const CommitRecord& rec : log) {
    for (const WriteOp& w : rec.writes) {
      const auto cell = std::make_pair(w.bin, w.slot);
      switch (w.kind) {
        case WriteOp::Place:
          model[cell] = {w.key, w.payload};
          break;
        case WriteOp::Clear:
          model.erase(cell);
          break;
        case WriteOp::SetPayload: {
          auto it = model.find(cell);
          if (it == model.end() || it->second.first != w.key) return false;
          it->second.second = w.payload;
          break;
        }
      }
    }
  }

  std::size_t live_count = 0;
  for (std::uint32_t b = 0; b < engine.num_bins(); ++b) {
    for (std::uint32_t s = 0; s < engine.bin_size(); ++s) {
      SlotState sl = engine.read_slot_state(b, s);
      auto it = model.find({b, s});
      if (sl.occupied) {
        ++live_count;
        if (it == model.end() || it->second.first != sl.key ||
            it->second.second != sl.payload)
          return false;
      } else if (it != model.end()) {
        return false;
      }
    }
  }
  return live_count == model.size();
}

bool dependency_direction_ok(const std::vector<CommitRecord>& log) {
  for (const CommitRecord& rec : log)
    for (const auto& [cell, version] : rec.reads)
      if (version >= rec.txn_id) return false;
  return true;
}

bool tied_commits_disjoint(const std::vector<CommitRecord>& log) {
  // A cell may appear several times within one commit (chain moves touch
  // slots as both source and destination); two different commits with the
  // same ID must not share a cell.
  std::map<std::uint64_t,
           std::map<std::pair<std::uint32_t, std::uint32_t>, int>>
      owners;
  int rec_idx = 0;
  for (const CommitRecord& rec : log) {
    ++rec_idx;
    for (const WriteOp& w : rec.writes) {
      int& owner = owners[rec.txn_id][{w.bin, w.slot}];
      if (owner == 0)
        owner = rec_idx;
      else if (owner != rec_idx)
        return false;
    }
  }
  return true;
}

}  // namespace cuckoo::txn
