#pragma once

#include <algorithm>

#include "cuckoo/search.hpp"

namespace cuckoo {

template <class View>
PlanResult plan_kickout(View& view, const KeyEntry& key, FrontierOrder order,
                        SearchLimits limits) {
  PlanResult res;
  const bool ghosts = view.ghosts();
  const std::uint32_t hashes = key.hash_count;

  std::vector<Candidate> arena;
  Frontier frontier(order);
  VisitedSet visited(64);

  std::vector<BinSnap> roots;
  roots.reserve(hashes);

  // Two-hash tables always view both bins (load-balanced placement);
  // wider tables stop scanning at the first bin with a usable free slot.
  int trivial_root = -1;
  int trivial_slot = -1;
  if (hashes == 2) {
    for (std::uint32_t b : key.bins()) {
      roots.push_back(view.fetch_bin(b));
      ++res.metrics.bins_viewed;
    }
    int best_occ = 0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      int f = roots[i].first_usable_free();
      if (f < 0) continue;
      int occ = roots[i].occupied_count();
      if (trivial_root < 0 || occ < best_occ) {
        trivial_root = static_cast<int>(i);
        trivial_slot = f;
        best_occ = occ;
      }
    }
  } else {
    for (std::uint32_t b : key.bins()) {
      roots.push_back(view.fetch_bin(b));
      ++res.metrics.bins_viewed;
      int f = roots.back().first_usable_free();
      if (f >= 0) {
        trivial_root = static_cast<int>(roots.size()) - 1;
        trivial_slot = f;
        break;
      }
    }
  }
  if (trivial_root >= 0) {
    const BinSnap& snap = roots[trivial_root];
    res.found = true;
    res.chain.terminal_bin = snap.bin;
    res.chain.terminal_slot = static_cast<std::uint32_t>(trivial_slot);
    res.cells.push_back(
        {snap.bin, res.chain.terminal_slot, snap.slots[trivial_slot].version});
    res.terminal_bin_had_duplicate = snap.any_duplicate();
    return res;
  }

  if (ghosts) {
    for (const BinSnap& snap : roots) {
      int d = snap.first_usable_duplicate();
      if (d < 0) continue;
      res.found = true;
      res.chain.terminal_bin = snap.bin;
      res.chain.terminal_slot = static_cast<std::uint32_t>(d);
      res.chain.terminal_duplicate = true;
      res.chain.terminal_key = snap.slots[d].entry.key;
      res.cells.push_back({snap.bin, res.chain.terminal_slot,
                           snap.slots[d].version});
      res.terminal_bin_had_duplicate = true;
      return res;
    }
  }

  for (const BinSnap& snap : roots) {
    if (!visited.insert(snap.bin)) continue;
    for (std::uint32_t s = 0; s < snap.slots.size(); ++s) {
      const SlotSnap& sl = snap.slots[s];
      if (!sl.occupied || sl.blocked || sl.duplicate) continue;
      arena.push_back(Candidate{snap.bin, s, sl.entry, 0, -1,
                                view.spawn_count(snap.bin), sl.version});
      frontier.push(static_cast<std::uint32_t>(arena.size() - 1), 0,
                    arena.back().spawn_key);
    }
  }

  auto finish = [&](std::uint32_t leaf, const BinSnap& tsnap, int tslot,
                    bool dup) {
    std::vector<std::uint32_t> path;
    for (std::int32_t i = static_cast<std::int32_t>(leaf); i >= 0;
         i = arena[i].parent)
      path.push_back(static_cast<std::uint32_t>(i));
    std::reverse(path.begin(), path.end());
    res.chain.moves.reserve(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
      const Candidate& c = arena[path[i]];
      ChainMove m;
      m.from_bin = c.bin;
      m.from_slot = c.slot;
      m.key = c.entry.key;
      if (i + 1 < path.size()) {
        m.to_bin = arena[path[i + 1]].bin;
        m.to_slot = arena[path[i + 1]].slot;
      } else {
        m.to_bin = tsnap.bin;
        m.to_slot = static_cast<std::uint32_t>(tslot);
      }
      res.chain.moves.push_back(m);
      res.cells.push_back({c.bin, c.slot, c.slot_version});
    }
    res.chain.terminal_bin = tsnap.bin;
    res.chain.terminal_slot = static_cast<std::uint32_t>(tslot);
    res.chain.terminal_duplicate = dup;
    res.chain.terminal_key = dup ? tsnap.slots[tslot].entry.key : 0;
    res.cells.push_back({tsnap.bin, res.chain.terminal_slot,
                         tsnap.slots[tslot].version});
    res.metrics.chain_length = res.chain.moves.size();
    res.terminal_bin_had_duplicate = tsnap.any_duplicate();
    res.found = true;
  };

  std::uint32_t spawns = 0;
  std::vector<std::uint32_t> round;
  const std::uint32_t batch = limits.batch ? limits.batch : 1;
  while (!frontier.empty() && spawns < limits.max_spawns) {
    round.clear();
    for (std::uint32_t i = 0; i < batch && !frontier.empty(); ++i)
      round.push_back(frontier.pop());
    for (std::uint32_t idx : round) {
      if (spawns >= limits.max_spawns) break;
      const Candidate cand = arena[idx];  // copy: arena may grow below
      ++spawns;
      view.note_spawn(cand.bin);
      for (std::uint32_t b : cand.entry.bins()) {
        if (b == cand.bin || visited.contains(b)) continue;
        BinSnap snap = view.fetch_bin(b);
        ++res.metrics.bins_viewed;
        visited.insert(b);
        int f = snap.first_usable_free();
        if (f >= 0) {
          res.metrics.spawns = spawns;
          finish(idx, snap, f, false);
          return res;
        }
        if (ghosts) {
          int d = snap.first_usable_duplicate();
          if (d >= 0) {
            res.metrics.spawns = spawns;
            finish(idx, snap, d, true);
            return res;
          }
        }
        for (std::uint32_t s = 0; s < snap.slots.size(); ++s) {
          const SlotSnap& sl = snap.slots[s];
          if (!sl.occupied || sl.blocked || sl.duplicate) continue;
          arena.push_back(Candidate{b, s, sl.entry, cand.depth + 1,
                                    static_cast<std::int32_t>(idx),
                                    view.spawn_count(b), sl.version});
          frontier.push(static_cast<std::uint32_t>(arena.size() - 1),
                        cand.depth + 1, arena.back().spawn_key);
        }
      }
    }
  }
  res.metrics.spawns = spawns;
  res.found = false;
  return res;
}

}  // namespace cuckoo
