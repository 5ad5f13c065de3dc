#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "cuckoo/table.hpp"
#include "cuckoo/walk.hpp"

namespace cuckoo {

struct SearchLimits {
  std::uint32_t max_spawns = 2000;
  // Candidates popped per round; k > 1 models prefetch-friendly spawning
  // of the k smallest-statistic records at a time.
  std::uint32_t batch = 1;
};

enum class FrontierOrder : std::uint8_t {
  Fifo,                 // breadth-first search
  SpawnCount,           // sorted search
  DepthThenSpawnCount,  // hybrid
};

// A record viewed by a search but not yet spawned. Candidates live in the
// search's arena; parent links reconstruct the kick-out chain.
struct Candidate {
  std::uint32_t bin = 0;
  std::uint32_t slot = 0;
  KeyEntry entry;
  std::uint32_t depth = 0;  // root candidates have depth 0
  std::int32_t parent = -1;
  std::uint8_t spawn_key = 0;  // containing bin's spawn count at enqueue
  std::uint64_t slot_version = 0;
};

// Pop order: FIFO pops oldest; SpawnCount pops the minimum enqueue-time
// spawn count of the candidate's bin; DepthThenSpawnCount orders by
// (depth, spawn count). All ties break by insertion order.
class Frontier {
 public:
  explicit Frontier(FrontierOrder order) : order_(order) {}

  void push(std::uint32_t arena_index, std::uint32_t depth,
            std::uint8_t spawn_key);
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::uint32_t pop();  // arena index of the next candidate

 private:
  struct Item {
    std::uint64_t primary;
    std::uint64_t seq;
    std::uint32_t index;
    bool operator>(const Item& o) const {
      if (primary != o.primary) return primary > o.primary;
      return seq > o.seq;
    }
  };
  FrontierOrder order_;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap_;
};

// Small open-addressed set of visited bin indices; the bin index is its
// own hash.
class VisitedSet {
 public:
  explicit VisitedSet(std::size_t expected = 8);
  bool insert(std::uint32_t bin);  // false if already present
  bool contains(std::uint32_t bin) const;
  std::size_t size() const { return count_; }

 private:
  void grow();
  static constexpr std::uint32_t kEmpty = 0xffffffffu;
  std::vector<std::uint32_t> cells_;
  std::size_t count_ = 0;
};

struct ChainMove {
  std::uint32_t from_bin = 0;
  std::uint32_t from_slot = 0;
  std::uint32_t to_bin = 0;
  std::uint32_t to_slot = 0;
  std::uint64_t key = 0;  // key expected in the from-slot
};

struct KickoutChain {
  // moves[0] starts at the root slot freed for the insertion; each move's
  // destination is the previous occupant's slot, ending at the terminal.
  std::vector<ChainMove> moves;
  std::uint32_t terminal_bin = 0;
  std::uint32_t terminal_slot = 0;
  bool terminal_duplicate = false;  // ghost chains may end at a duplicate
  std::uint64_t terminal_key = 0;   // occupant when terminal_duplicate

  std::uint32_t root_bin() const {
    return moves.empty() ? terminal_bin : moves[0].from_bin;
  }
  std::uint32_t root_slot() const {
    return moves.empty() ? terminal_slot : moves[0].from_slot;
  }
};

// Slot version observed while planning; used by transactional callers to
// revalidate chains. Serial plans record version 0.
struct PlanCell {
  std::uint32_t bin = 0;
  std::uint32_t slot = 0;
  std::uint64_t version = 0;
};

struct PlanResult {
  bool found = false;
  KickoutChain chain;
  OpMetrics metrics;
  // Duplicate present in the terminal bin at plan time (ghost invariant
  // probe; meaningful when moves is non-empty).
  bool terminal_bin_had_duplicate = false;
  std::vector<PlanCell> cells;  // every slot the chain touches
};

struct StaleChainError : std::runtime_error {
  StaleChainError() : std::runtime_error("kick-out chain is stale") {}
};

PlanResult plan_bfs(Table& table, const KeyEntry& key, SearchLimits = {});
PlanResult plan_sorted(Table& table, const KeyEntry& key, SearchLimits = {});
PlanResult plan_hybrid(Table& table, const KeyEntry& key, SearchLimits = {});
PlanResult plan_search(Table& table, const KeyEntry& key, FrontierOrder order,
                       SearchLimits = {});

// Executes the moves terminal-first so each lands in a free slot; a
// duplicate terminal is first removed and its twin promoted. Afterwards the
// root slot is free. Throws StaleChainError if any slot changed since
// planning (concurrent use only; serial callers never see it).
void apply_chain(Table& table, const KickoutChain& chain);

// Plan, apply, and place: full search-based insertion.
WalkOutcome insert_search(Table& table, const KeyEntry& key,
                          FrontierOrder order, SearchLimits limits = {});

// ---- generic planner over a table view --------------------------------
//
// A View provides bin snapshots plus spawn-count bookkeeping:
//   std::uint32_t num_bins(), bin_size(), num_hashes();
//   bool ghosts();
//   BinSnap fetch_bin(std::uint32_t bin);
//   std::uint8_t spawn_count(std::uint32_t bin);
//   void note_spawn(std::uint32_t bin);
// Blocked slots (claimed or locked by concurrent writers) are neither
// terminals nor victims.

struct SlotSnap {
  bool occupied = false;
  bool duplicate = false;
  bool blocked = false;
  KeyEntry entry;
  std::uint64_t version = 0;
};

struct BinSnap {
  std::uint32_t bin = 0;
  std::uint64_t version = 0;
  std::vector<SlotSnap> slots;

  int first_usable_free() const {
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (!slots[i].occupied && !slots[i].blocked) return static_cast<int>(i);
    return -1;
  }
  int first_usable_duplicate() const {
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i].occupied && slots[i].duplicate && !slots[i].blocked)
        return static_cast<int>(i);
    return -1;
  }
  bool any_duplicate() const {
    for (const auto& s : slots)
      if (s.occupied && s.duplicate) return true;
    return false;
  }
  int occupied_count() const {
    int n = 0;
    for (const auto& s : slots) n += s.occupied ? 1 : 0;
    return n;
  }
};

struct SerialView {
  Table& table;

  std::uint32_t num_bins() const { return table.num_bins(); }
  std::uint32_t bin_size() const { return table.bin_size(); }
  std::uint32_t num_hashes() const { return table.num_hashes(); }
  bool ghosts() const { return table.config().ghost_enabled; }
  std::uint8_t spawn_count(std::uint32_t bin) const {
    return table.bin_meta(bin).spawn_count;
  }
  void note_spawn(std::uint32_t bin) { table.note_spawn(bin); }

  BinSnap fetch_bin(std::uint32_t bin) const {
    table.touch_bin(bin);
    BinSnap snap;
    snap.bin = bin;
    snap.slots.resize(table.bin_size());
    for (std::uint32_t i = 0; i < table.bin_size(); ++i) {
      const Slot& s = table.slot(bin, i);
      snap.slots[i].occupied = s.occupied;
      snap.slots[i].duplicate = s.duplicate;
      snap.slots[i].entry = s.entry;
    }
    return snap;
  }
};

template <class View>
PlanResult plan_kickout(View& view, const KeyEntry& key, FrontierOrder order,
                        SearchLimits limits);

}  // namespace cuckoo
