#include "cuckoo/txn/engine.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <thread>

#include "cuckoo/detail/plan_impl.hpp"

namespace cuckoo::txn {

EngineOptions preset_options(int preset) {
  EngineOptions o;
  switch (preset) {
    case 1:  // naive
      o.planner = ChainPlanner::RandomWalk;
      break;
    case 2:  // + local retries
      o.local_retries = true;
      o.planner = ChainPlanner::RandomWalk;
      break;
    case 3:  // + queue-kicking via fetch-and-add hit counters
      o.local_retries = true;
      o.queue_kicking = true;
      o.planner = ChainPlanner::QueueWalk;
      break;
    case 4:  // + system-transaction kick-outs
      o.local_retries = true;
      o.queue_kicking = true;
      o.system_kickouts = true;
      o.planner = ChainPlanner::QueueWalk;
      break;
    case 5:  // retries + claim flags
      o.local_retries = true;
      o.claim_flags = true;
      o.planner = ChainPlanner::SortedSearch;
      break;
    case 6:  // retries + claims + system kick-outs
      o.local_retries = true;
      o.claim_flags = true;
      o.system_kickouts = true;
      o.planner = ChainPlanner::SortedSearch;
      break;
    default:
      throw std::invalid_argument("preset must be in 1..6");
  }
  return o;
}

void AbortStats::record_abort(double density, AbortCause cause) {
  std::size_t band = static_cast<std::size_t>(density / kBandWidth);
  if (aborts_per_band.size() <= band) aborts_per_band.resize(band + 1, 0);
  ++aborts_per_band[band];
  ++by_cause[static_cast<std::size_t>(cause)];
  ++attempts;
}

std::uint64_t AbortStats::cumulative_aborts_at(double density) const {
  std::uint64_t sum = 0;
  for (std::size_t b = 0; b < aborts_per_band.size(); ++b) {
    if (static_cast<double>(b) * kBandWidth >= density + 1e-12) break;
    sum += aborts_per_band[b];
  }
  return sum;
}

std::uint64_t AbortStats::total_aborts() const {
  std::uint64_t sum = 0;
  for (std::uint64_t v : aborts_per_band) sum += v;
  return sum;
}

void AbortStats::merge(const AbortStats& other) {
  if (aborts_per_band.size() < other.aborts_per_band.size())
    aborts_per_band.resize(other.aborts_per_band.size(), 0);
  for (std::size_t b = 0; b < other.aborts_per_band.size(); ++b)
    aborts_per_band[b] += other.aborts_per_band[b];
  for (std::size_t c = 0; c < by_cause.size(); ++c)
    by_cause[c] += other.by_cause[c];
  commits += other.commits;
  attempts += other.attempts;
}

// --------------------------------------------------------------------
// Engine basics
// --------------------------------------------------------------------

TxnEngine::TxnEngine(std::uint32_t num_bins, std::uint32_t bin_size,
                     EngineOptions options)
    : num_bins_(num_bins), bin_size_(bin_size), options_(options) {
  if (num_bins < 2 || bin_size < 1)
    throw std::invalid_argument("engine needs >= 2 bins and >= 1 slot");
  slots_ = std::vector<SlotCell>(std::uint64_t{num_bins} * bin_size);
  bins_ = std::vector<BinCell>(num_bins);
}

std::atomic<std::uint64_t>& TxnEngine::ctrl_of(const CellRef& ref) {
  return ref.is_slot ? slot_cell(ref.bin, ref.slot).ctrl : bins_[ref.bin].ctrl;
}

bool TxnEngine::claim(std::uint32_t bin, std::uint32_t slot) {
  std::uint64_t prev = slot_cell(bin, slot).ctrl.fetch_or(
      kClaim, std::memory_order_acq_rel);
  return (prev & kClaim) == 0;
}

void TxnEngine::unclaim(std::uint32_t bin, std::uint32_t slot) {
  slot_cell(bin, slot).ctrl.fetch_and(~kClaim, std::memory_order_acq_rel);
}

SlotState TxnEngine::snapshot_slot(std::uint32_t bin,
                                   std::uint32_t slot) const {
  auto& c = const_cast<SlotCell&>(slot_cell(bin, slot));
  int spins = 0;
  for (;;) {
    std::uint64_t v1 = c.ctrl.load(std::memory_order_acquire);
    if (!(v1 & kLock)) {
      SlotState s;
      s.key = std::atomic_ref<std::uint64_t>(c.key).load(
          std::memory_order_relaxed);
      s.payload = std::atomic_ref<std::uint64_t>(c.payload).load(
          std::memory_order_relaxed);
      s.bin0 = std::atomic_ref<std::uint32_t>(c.bin0).load(
          std::memory_order_relaxed);
      s.bin1 = std::atomic_ref<std::uint32_t>(c.bin1).load(
          std::memory_order_relaxed);
      s.occupied = std::atomic_ref<std::uint32_t>(c.occupied)
                       .load(std::memory_order_relaxed) != 0;
      std::atomic_thread_fence(std::memory_order_acquire);
      std::uint64_t v2 = c.ctrl.load(std::memory_order_relaxed);
      if (v1 == v2) {
        s.version = v1 >> kVersionShift;
        s.claimed = (v1 & kClaim) != 0;
        s.locked = false;
        return s;
      }
    }
    if (++spins > 100) std::this_thread::yield();
  }
}

TxnEngine::BinSnapshot TxnEngine::snapshot_bin(std::uint32_t bin) const {
  auto& bc = const_cast<BinCell&>(bins_[bin]);
  int spins = 0;
  for (;;) {
    std::uint64_t b1 = bc.ctrl.load(std::memory_order_acquire);
    if (!(b1 & kLock)) {
      BinSnapshot snap;
      snap.slots.resize(bin_size_);
      for (std::uint32_t s = 0; s < bin_size_; ++s)
        snap.slots[s] = snapshot_slot(bin, s);
      std::atomic_thread_fence(std::memory_order_acquire);
      std::uint64_t b2 = bc.ctrl.load(std::memory_order_relaxed);
      if (b1 == b2) {
        snap.version = b1 >> kVersionShift;
        return snap;
      }
    }
    if (++spins > 100) std::this_thread::yield();
  }
}

void TxnEngine::lock_cell(const CellRef& ref) {
  auto& c = ctrl_of(ref);
  int spins = 0;
  for (;;) {
    std::uint64_t cur = c.load(std::memory_order_relaxed);
    if (!(cur & kLock) &&
        c.compare_exchange_weak(cur, cur | kLock,
                                std::memory_order_acq_rel,
                                std::memory_order_relaxed))
      return;
    if (++spins > 200) std::this_thread::yield();
  }
}

void TxnEngine::unlock_cell(const CellRef& ref, std::uint64_t new_version,
                            bool clear_claim) {
  auto& c = ctrl_of(ref);
  std::uint64_t cur = c.load(std::memory_order_relaxed);
  std::uint64_t next = (new_version << kVersionShift);
  if (!clear_claim) next |= (cur & kClaim);
  c.store(next, std::memory_order_release);
}

void TxnEngine::unlock_cell_keep_version(const CellRef& ref) {
  auto& c = ctrl_of(ref);
  c.fetch_and(~kLock, std::memory_order_acq_rel);
}

void TxnEngine::store_slot(std::uint32_t bin, std::uint32_t slot,
                           const SlotState& s) {
  SlotCell& c = slot_cell(bin, slot);
  std::atomic_ref<std::uint64_t>(c.key).store(s.key,
                                              std::memory_order_relaxed);
  std::atomic_ref<std::uint64_t>(c.payload).store(s.payload,
                                                  std::memory_order_relaxed);
  std::atomic_ref<std::uint32_t>(c.bin0).store(s.bin0,
                                               std::memory_order_relaxed);
  std::atomic_ref<std::uint32_t>(c.bin1).store(s.bin1,
                                               std::memory_order_relaxed);
  std::atomic_ref<std::uint32_t>(c.occupied)
      .store(s.occupied ? 1 : 0, std::memory_order_relaxed);
}

SlotState TxnEngine::read_slot_state(std::uint32_t bin,
                                     std::uint32_t slot) const {
  SlotState s = snapshot_slot(bin, slot);
  return s;
}

std::uint64_t TxnEngine::bin_version(std::uint32_t bin) const {
  return bins_[bin].ctrl.load(std::memory_order_acquire) >> kVersionShift;
}

bool TxnEngine::audit_clean() const {
  for (const SlotCell& c : slots_)
    if (c.ctrl.load(std::memory_order_acquire) & (kLock | kClaim))
      return false;
  for (const BinCell& b : bins_)
    if (b.ctrl.load(std::memory_order_acquire) & kLock) return false;
  return true;
}

void TxnEngine::debug_set_slot_version(std::uint32_t bin, std::uint32_t slot,
                                       std::uint64_t version) {
  slot_cell(bin, slot).ctrl.store(version << kVersionShift,
                                  std::memory_order_release);
}

void TxnEngine::debug_set_bin_version(std::uint32_t bin,
                                      std::uint64_t version) {
  bins_[bin].ctrl.store(version << kVersionShift, std::memory_order_release);
}

void TxnEngine::debug_place(std::uint32_t bin, std::uint32_t slot,
                            std::uint64_t key, std::uint64_t payload,
                            std::uint32_t b0, std::uint32_t b1) {
  SlotState s;
  s.occupied = true;
  s.key = key;
  s.payload = payload;
  s.bin0 = b0;
  s.bin1 = b1;
  store_slot(bin, slot, s);
  occupied_.fetch_add(1, std::memory_order_relaxed);
  if (options_.record_commits) {
    CommitRecord rec;
    rec.txn_id = 0;  // fixture writes precede every real commit
    rec.thread_id = 0xffffffffu;
    rec.writes.push_back({WriteOp::Place, bin, slot, key, payload, b0, b1});
    log_commit(std::move(rec));
  }
}

void TxnEngine::log_commit(CommitRecord&& rec) {
  if (!options_.record_commits) return;
  std::lock_guard<std::mutex> g(log_mutex_);
  log_.push_back(std::move(rec));
}

std::vector<CommitRecord> TxnEngine::commit_log() const {
  std::lock_guard<std::mutex> g(log_mutex_);
  return log_;
}

// --------------------------------------------------------------------
// Transaction
// --------------------------------------------------------------------

Transaction::Transaction(TxnEngine& engine, TxnContext& ctx)
    : engine_(engine), ctx_(ctx) {}

Transaction::~Transaction() {
  if (status_ == TxnStatus::Planning || status_ == TxnStatus::Validating)
    abort(AbortCause::BinExhausted);
}

Transaction::CellEntry& Transaction::cell(const CellRef& ref) {
  return cells_[ref];
}

void Transaction::note_read_slot(const CellRef& ref, std::uint64_t version) {
  auto it = cells_.find(ref);
  if (it == cells_.end()) {
    CellEntry e;
    e.observed = version;
    cells_.emplace(ref, e);
  }
  // an existing entry keeps its first observation
}

void Transaction::release_claims() {
  for (auto& [ref, entry] : cells_) {
    if (entry.claimed) {
      engine_.unclaim(ref.bin, ref.slot);
      entry.claimed = false;
    }
  }
}

void Transaction::abort(AbortCause cause) {
  for (const CellRef& ref : locked_) engine_.unlock_cell_keep_version(ref);
  locked_.clear();
  release_claims();
  status_ = TxnStatus::Aborted;
  abort_cause_ = cause;
}

// Planned-state lookup helpers -----------------------------------------

std::optional<std::uint64_t> Transaction::read(const TxnKey& key) {
  if (status_ != TxnStatus::Planning)
    throw std::logic_error("read outside planning stage");

  auto pending = pending_ops_.find(key.key);
  if (pending != pending_ops_.end()) {
    if (pending->second >= 0) {
      if (inserts_[pending->second].cancelled) return std::nullopt;
      return inserts_[pending->second].payload;
    }
    std::int32_t u = -pending->second - 1;
    if (updates_[u].is_delete) return std::nullopt;
    return updates_[u].payload;
  }

  for (std::uint32_t bin : {key.bin0, key.bin1}) {
    auto snap = engine_.snapshot_bin(bin);
    for (std::uint32_t s = 0; s < snap.slots.size(); ++s) {
      const SlotState& sl = snap.slots[s];
      if (sl.occupied && sl.key == key.key) {
        note_read_slot({true, bin, s}, sl.version);
        return sl.payload;
      }
    }
    // remember the bin version as an absence witness for this bin
    CellRef ref{false, bin, 0};
    auto it = cells_.find(ref);
    if (it == cells_.end()) {
      CellEntry e;
      e.observed = snap.version;
      e.absent_keys.push_back(key.key);
      cells_.emplace(ref, e);
    } else {
      it->second.absent_keys.push_back(key.key);
    }
  }
  return std::nullopt;
}

// --------------------------------------------------------------------
// Chain planning against the live table with the transaction's overlay
// --------------------------------------------------------------------

// View adapter for the generic search planner.
struct TxnPlanView {
  TxnEngine& eng;
  Transaction& txn;
  std::uint32_t nbins;
  std::uint32_t bsize;

  std::uint32_t num_bins() const { return nbins; }
  std::uint32_t bin_size() const { return bsize; }
  bool ghosts() const { return false; }
  std::uint8_t spawn_count(std::uint32_t b) const {
    return static_cast<std::uint8_t>(std::min<std::uint32_t>(
        eng.spawn_count_of(b), 255));
  }
  void note_spawn(std::uint32_t b) { eng.bump_spawn(b); }
  BinSnap fetch_bin(std::uint32_t b) const {
    return txn.planned_bin_snap(b);
  }
};

// Accessors the view needs; kept out of the public header surface.
std::uint32_t TxnEngine::spawn_count_of(std::uint32_t bin) const {
  return bins_[bin].spawns.load(std::memory_order_relaxed);
}
void TxnEngine::bump_spawn(std::uint32_t bin) {
  bins_[bin].spawns.fetch_add(1, std::memory_order_relaxed);
}
std::uint32_t TxnEngine::hit_fetch_add(std::uint32_t bin) {
  return bins_[bin].hit.fetch_add(1, std::memory_order_relaxed);
}

BinSnap Transaction::planned_bin_snap(std::uint32_t bin) const {
  auto live = engine_.snapshot_bin(bin);
  BinSnap snap;
  snap.bin = bin;
  snap.version = live.version;
  snap.slots.resize(live.slots.size());
  for (std::uint32_t s = 0; s < live.slots.size(); ++s) {
    const SlotState& sl = live.slots[s];
    SlotSnap& out = snap.slots[s];
    out.occupied = sl.occupied;
    out.blocked = sl.claimed;
    out.version = sl.version;
    out.entry.key = sl.key;
    out.entry.payload = sl.payload;
    out.entry.hash_count = 2;
    out.entry.hashes[0] = sl.bin0;
    out.entry.hashes[1] = sl.bin1;
    auto ov = planned_slots_.find({bin, s});
    if (ov != planned_slots_.end()) {
      // Slots this transaction already plans to write are neither free
      // nor evictable for further planning.
      out.occupied = ov->second.occupied;
      out.blocked = true;
      out.entry.key = ov->second.key;
      out.entry.payload = ov->second.payload;
      out.entry.hashes[0] = ov->second.bin0;
      out.entry.hashes[1] = ov->second.bin1;
    }
  }
  return snap;
}

// --------------------------------------------------------------------
// Walk-style chain planners (random and queue). Both operate on planned
// snapshots plus a local overlay of the walk's own moves; slots the walk
// already touched are blocked so the resulting chain applies cleanly in
// reverse order.
// --------------------------------------------------------------------

namespace detail {

struct WalkPlan {
  bool found = false;
  KickoutChain chain;
  std::vector<PlanCell> cells;  // move from-slots in order, then terminal
};

struct PathNode {
  std::uint32_t bin, slot;
  std::uint64_t key;
  std::uint64_t version;
};

static WalkPlan finish_walk(const std::vector<PathNode>& path, std::uint32_t t_bin,
                     std::uint32_t t_slot, std::uint64_t t_version) {
  WalkPlan plan;
  plan.found = true;
  for (std::size_t i = 0; i < path.size(); ++i) {
    ChainMove m;
    m.from_bin = path[i].bin;
    m.from_slot = path[i].slot;
    m.key = path[i].key;
    if (i + 1 < path.size()) {
      m.to_bin = path[i + 1].bin;
      m.to_slot = path[i + 1].slot;
    } else {
      m.to_bin = t_bin;
      m.to_slot = t_slot;
    }
    plan.chain.moves.push_back(m);
    plan.cells.push_back({path[i].bin, path[i].slot, path[i].version});
  }
  plan.chain.terminal_bin = t_bin;
  plan.chain.terminal_slot = t_slot;
  plan.cells.push_back({t_bin, t_slot, t_version});
  return plan;
}

static WalkPlan plan_walk_random(Transaction& txn, Rng& rng, const TxnKey& key,
                          std::uint32_t max_steps) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, bool> touched;
  std::vector<PathNode> path;

  std::uint32_t bin = rng.below32(2) ? key.bin1 : key.bin0;
  std::uint32_t cur_b0 = key.bin0, cur_b1 = key.bin1;
  for (std::uint32_t step = 0; step <= max_steps; ++step) {
    BinSnap snap = txn.planned_bin_snap(bin);
    int free_slot = -1;
    std::uint32_t cands[64];
    std::uint32_t ncand = 0;
    for (std::uint32_t s = 0; s < snap.slots.size(); ++s) {
      if (touched.count({bin, s})) continue;
      const SlotSnap& sl = snap.slots[s];
      if (!sl.occupied && !sl.blocked && free_slot < 0)
        free_slot = static_cast<int>(s);
      if (sl.occupied && !sl.blocked && ncand < 64) cands[ncand++] = s;
    }
    if (free_slot >= 0)
      return finish_walk(path, bin, static_cast<std::uint32_t>(free_slot),
                         snap.slots[free_slot].version);
    if (ncand == 0) return {};
    std::uint32_t s = cands[rng.below32(ncand)];
    path.push_back({bin, s, snap.slots[s].entry.key, snap.slots[s].version});
    touched[{bin, s}] = true;
    cur_b0 = snap.slots[s].entry.hashes[0];
    cur_b1 = snap.slots[s].entry.hashes[1];
    bin = cur_b0 == bin ? cur_b1 : cur_b0;
  }
  return {};
}

static WalkPlan plan_walk_queue(Transaction& txn, TxnEngine& eng,
                         std::uint32_t first_bin, std::uint32_t first_slot,
                         std::uint32_t max_steps) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, bool> touched;
  std::vector<PathNode> path;
  const std::uint32_t bsize = eng.bin_size();

  std::uint32_t bin = first_bin;
  std::uint32_t slot = first_slot;
  for (std::uint32_t step = 0; step <= max_steps; ++step) {
    BinSnap snap = txn.planned_bin_snap(bin);
    // The fetch-and-add discipline assigns one slot; blocked or already
    // touched slots get a bounded number of re-draws.
    std::uint32_t tries = 0;
    while ((snap.slots[slot].blocked || touched.count({bin, slot})) &&
           tries < bsize) {
      slot = eng.hit_fetch_add(bin) % bsize;
      ++tries;
    }
    if (snap.slots[slot].blocked || touched.count({bin, slot})) return {};
    const SlotSnap& sl = snap.slots[slot];
    if (!sl.occupied)
      return finish_walk(path, bin, slot, sl.version);
    path.push_back({bin, slot, sl.entry.key, sl.version});
    touched[{bin, slot}] = true;
    std::uint32_t b0 = sl.entry.hashes[0], b1 = sl.entry.hashes[1];
    bin = b0 == bin ? b1 : b0;
    slot = eng.hit_fetch_add(bin) % bsize;
  }
  return {};
}

}  // namespace detail

// --------------------------------------------------------------------
// Insert planning
// --------------------------------------------------------------------

namespace {

int first_usable_free(const BinSnap& snap) { return snap.first_usable_free(); }

int usable_free_count(const BinSnap& snap) {
  int n = 0;
  for (const SlotSnap& s : snap.slots)
    if (!s.occupied && !s.blocked) ++n;
  return n;
}

}  // namespace

OpStatus Transaction::insert(const TxnKey& key, std::uint64_t payload) {
  if (status_ != TxnStatus::Planning)
    throw std::logic_error("insert outside planning stage");
  if (pending_ops_.count(key.key)) return OpStatus::AlreadyPresent;

  // Absence check against live snapshots; the witnesses are the two bin
  // versions.
  auto live0 = engine_.snapshot_bin(key.bin0);
  auto live1 = engine_.snapshot_bin(key.bin1);
  for (const auto* live : {&live0, &live1}) {
    const std::uint32_t bin = live == &live0 ? key.bin0 : key.bin1;
    for (std::uint32_t s = 0; s < live->slots.size(); ++s) {
      if (live->slots[s].occupied && live->slots[s].key == key.key) {
        note_read_slot({true, bin, s}, live->slots[s].version);
        return OpStatus::AlreadyPresent;
      }
    }
  }

  const EngineOptions& opt = engine_.options();
  struct Plan {
    std::uint32_t t_bin = 0, t_slot = 0;
    std::uint64_t t_version = 0;
    KickoutChain chain;
    std::vector<PlanCell> cells;  // chain from-slots + terminal (or target)
    bool applied_early = false;
  };
  std::optional<Plan> plan;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> held_claims;

  auto unwind_claims = [&] {
    for (auto [b, s] : held_claims) engine_.unclaim(b, s);
    held_claims.clear();
  };

  // Claim each planned cell, re-validating its snapshot afterwards.
  auto claim_cells = [&](const std::vector<PlanCell>& cells,
                         const KickoutChain& chain) -> bool {
    if (!opt.claim_flags) return true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const PlanCell& c = cells[i];
      if (!engine_.claim(c.bin, c.slot)) return false;
      held_claims.push_back({c.bin, c.slot});
      SlotState now = engine_.snapshot_slot(c.bin, c.slot);
      if (now.version != c.version) return false;
      const bool is_terminal = i + 1 == cells.size();
      if (is_terminal && chain.moves.empty() && now.occupied) return false;
    }
    return true;
  };

  for (std::uint32_t attempt = 0; attempt < opt.max_rechoose && !plan;
       ++attempt) {
    BinSnap v0 = planned_bin_snap(key.bin0);
    BinSnap v1 = planned_bin_snap(key.bin1);
    const int free0 = usable_free_count(v0);
    const int free1 = usable_free_count(v1);

    // Load balancing, no hit balancing: the emptier bin wins, full ties
    // break by coin flip.
    std::uint32_t bin;
    const BinSnap* view;
    if (free0 > free1) {
      bin = key.bin0;
      view = &v0;
    } else if (free1 > free0) {
      bin = key.bin1;
      view = &v1;
    } else {
      bin = ctx_.rng().below32(2) ? key.bin1 : key.bin0;
      view = bin == key.bin0 ? &v0 : &v1;
    }

    Plan p;
    if (opt.queue_kicking) {
      std::uint32_t slot = engine_.hit_fetch_add(bin) % engine_.bin_size();
      const SlotSnap& sl = view->slots[slot];
      if (sl.blocked) continue;  // redraw on the next attempt
      if (!sl.occupied) {
        p.t_bin = bin;
        p.t_slot = slot;
        p.t_version = sl.version;
        p.cells.push_back({bin, slot, sl.version});
      } else {
        detail::WalkPlan w = detail::plan_walk_queue(
            *this, engine_, bin, slot, opt.max_walk_steps);
        if (!w.found) continue;
        p.chain = std::move(w.chain);
        p.cells = std::move(w.cells);
        p.t_bin = p.chain.root_bin();
        p.t_slot = p.chain.root_slot();
        p.t_version = p.cells.front().version;
      }
    } else if (free0 > 0 || free1 > 0) {
      int slot = first_usable_free(*view);
      p.t_bin = bin;
      p.t_slot = static_cast<std::uint32_t>(slot);
      p.t_version = view->slots[slot].version;
      p.cells.push_back({p.t_bin, p.t_slot, p.t_version});
    } else {
      detail::WalkPlan w;
      if (opt.planner == ChainPlanner::SortedSearch) {
        TxnPlanView pv{engine_, *this, engine_.num_bins(),
                       engine_.bin_size()};
        KeyEntry probe;
        probe.key = key.key;
        probe.payload = payload;
        probe.hash_count = 2;
        probe.hashes[0] = key.bin0;
        probe.hashes[1] = key.bin1;
        PlanResult pr = plan_kickout(pv, probe, FrontierOrder::SpawnCount,
                                     SearchLimits{opt.max_spawns, 1});
        if (pr.found) {
          w.found = true;
          w.chain = std::move(pr.chain);
          w.cells = std::move(pr.cells);
        }
      } else {
        w = detail::plan_walk_random(*this, ctx_.rng(), key,
                                     opt.max_walk_steps);
      }
      if (!w.found) continue;
      p.chain = std::move(w.chain);
      p.cells = std::move(w.cells);
      p.t_bin = p.chain.root_bin();
      p.t_slot = p.chain.root_slot();
      p.t_version = p.cells.front().version;
    }

    if (!claim_cells(p.cells, p.chain)) {
      unwind_claims();
      continue;
    }
    plan = std::move(p);
  }

  if (!plan) {
    unwind_claims();
    abort(AbortCause::BinExhausted);
    return OpStatus::Fail;
  }

  // System-transaction kick-outs: run the chain now, then insert into the
  // freed root slot. Replanning on mid-chain invalidation is the caller's
  // loop here; with claim flags the first attempt always sticks.
  if (engine_.options().system_kickouts && !plan->chain.moves.empty()) {
    for (std::uint32_t replan = 0; replan <= engine_.options().max_replans;
         ++replan) {
      if (engine_.system_kickout(ctx_, plan->chain, plan->cells)) {
        SlotState root = engine_.snapshot_slot(plan->chain.root_bin(),
                                               plan->chain.root_slot());
        Plan simple;
        simple.t_bin = plan->chain.root_bin();
        simple.t_slot = plan->chain.root_slot();
        simple.t_version = root.version;
        simple.cells.push_back({simple.t_bin, simple.t_slot, root.version});
        simple.applied_early = true;
        // claims on the other chain slots were released move by move
        held_claims.clear();
        if (engine_.options().claim_flags)
          held_claims.push_back({simple.t_bin, simple.t_slot});
        plan = std::move(simple);
        break;
      }
      // replan from scratch
      unwind_claims();
      Plan p;
      detail::WalkPlan w;
      if (engine_.options().planner == ChainPlanner::SortedSearch) {
        TxnPlanView pv{engine_, *this, engine_.num_bins(),
                       engine_.bin_size()};
        KeyEntry probe;
        probe.key = key.key;
        probe.payload = payload;
        probe.hash_count = 2;
        probe.hashes[0] = key.bin0;
        probe.hashes[1] = key.bin1;
        PlanResult pr = plan_kickout(pv, probe, FrontierOrder::SpawnCount,
                                     SearchLimits{opt.max_spawns, 1});
        if (pr.found) {
          w.found = true;
          w.chain = std::move(pr.chain);
          w.cells = std::move(pr.cells);
        }
      } else if (engine_.options().planner == ChainPlanner::QueueWalk) {
        std::uint32_t bin =
            ctx_.rng().below32(2) ? key.bin1 : key.bin0;
        std::uint32_t slot = engine_.hit_fetch_add(bin) % engine_.bin_size();
        BinSnap vb = planned_bin_snap(bin);
        if (!vb.slots[slot].blocked && !vb.slots[slot].occupied) {
          w.found = true;
          w.cells.push_back({bin, slot, vb.slots[slot].version});
          w.chain.terminal_bin = bin;
          w.chain.terminal_slot = slot;
        } else if (!vb.slots[slot].blocked) {
          w = detail::plan_walk_queue(*this, engine_, bin, slot,
                                      opt.max_walk_steps);
        }
      } else {
        w = detail::plan_walk_random(*this, ctx_.rng(), key,
                                     opt.max_walk_steps);
      }
      if (!w.found) {
        abort(AbortCause::BinExhausted);
        return OpStatus::Fail;
      }
      p.chain = std::move(w.chain);
      p.cells = std::move(w.cells);
      p.t_bin = p.chain.root_bin();
      p.t_slot = p.chain.root_slot();
      p.t_version = p.cells.front().version;
      if (!claim_cells(p.cells, p.chain)) {
        unwind_claims();
        abort(AbortCause::BinExhausted);
        return OpStatus::Fail;
      }
      plan = std::move(p);
      // last iteration keeps the chain for commit-time application
    }
  }

  // Register cells: the target slot and every chain slot join the write
  // set; the target bin's version witnesses the key's absence (write set,
  // insertions bump it); the other bin is a read-set absence witness.
  for (const PlanCell& c : plan->cells) {
    CellRef ref{true, c.bin, c.slot};
    auto [it, fresh] = cells_.try_emplace(ref);
    if (fresh) it->second.observed = c.version;
    it->second.write = true;
  }
  for (auto [b, s] : held_claims) {
    cells_[CellRef{true, b, s}].claimed = true;
  }
  held_claims.clear();

  const std::uint32_t other_bin =
      plan->t_bin == key.bin0 ? key.bin1 : key.bin0;
  {
    auto [it, fresh] = cells_.try_emplace(CellRef{false, plan->t_bin, 0});
    if (fresh)
      it->second.observed =
          plan->t_bin == key.bin0 ? live0.version : live1.version;
    it->second.write = true;
    it->second.absent_keys.push_back(key.key);
  }
  {
    auto [it, fresh] = cells_.try_emplace(CellRef{false, other_bin, 0});
    if (fresh)
      it->second.observed =
          other_bin == key.bin0 ? live0.version : live1.version;
    it->second.absent_keys.push_back(key.key);
  }

  // Planned-state overlay: chain moves relocate their keys, the target
  // slot receives the new key.
  for (const ChainMove& m : plan->chain.moves) {
    BinSnap from = planned_bin_snap(m.from_bin);
    const SlotSnap& sl = from.slots[m.from_slot];
    planned_slots_[{m.to_bin, m.to_slot}] =
        Overlay{true, sl.entry.key, sl.entry.payload, sl.entry.hashes[0],
                sl.entry.hashes[1]};
  }
  planned_slots_[{plan->t_bin, plan->t_slot}] =
      Overlay{true, key.key, payload, key.bin0, key.bin1};

  PendingInsert pi;
  pi.key = key;
  pi.payload = payload;
  pi.target_bin = plan->t_bin;
  pi.target_slot = plan->t_slot;
  pi.chain = std::move(plan->chain);
  pi.chain_applied_early = plan->applied_early;
  pending_ops_[key.key] = static_cast<std::int32_t>(inserts_.size());
  inserts_.push_back(std::move(pi));
  return OpStatus::Planned;
}

// --------------------------------------------------------------------
// Deletes and overwrites
// --------------------------------------------------------------------

OpStatus Transaction::erase(const TxnKey& key) { return update_op(key, true, 0); }

OpStatus Transaction::overwrite(const TxnKey& key, std::uint64_t payload) {
  return update_op(key, false, payload);
}

OpStatus Transaction::update_op(const TxnKey& key, bool is_delete,
                                std::uint64_t payload) {
  if (status_ != TxnStatus::Planning)
    throw std::logic_error("update outside planning stage");

  auto pending = pending_ops_.find(key.key);
  if (pending != pending_ops_.end()) {
    if (pending->second >= 0) {
      PendingInsert& pi = inserts_[pending->second];
      if (pi.cancelled) return OpStatus::NotFound;
      if (is_delete) {
        pi.cancelled = true;  // net effect of insert-then-delete is nothing
      } else {
        pi.payload = payload;
        planned_slots_[{pi.target_bin, pi.target_slot}].payload = payload;
      }
      return OpStatus::Planned;
    }
    PendingUpdate& pu = updates_[-pending->second - 1];
    if (pu.is_delete) return OpStatus::NotFound;
    pu.is_delete = is_delete;
    pu.payload = payload;
    if (!is_delete)
      planned_slots_[{pu.bin, pu.slot}].payload = payload;
    return OpStatus::Planned;
  }

  for (std::uint32_t round = 0; round < 3; ++round) {
    int found_bin = -1, found_slot = -1;
    std::uint64_t found_version = 0;
    for (std::uint32_t bin : {key.bin0, key.bin1}) {
      auto snap = engine_.snapshot_bin(bin);
      for (std::uint32_t s = 0; s < snap.slots.size(); ++s) {
        const SlotState& sl = snap.slots[s];
        if (sl.occupied && sl.key == key.key) {
          if (engine_.options().claim_flags && sl.claimed) {
            // Never wait on a claim: conflicting writers abort.
            abort(AbortCause::UpdateSawClaim);
            return OpStatus::Fail;
          }
          found_bin = static_cast<int>(bin);
          found_slot = static_cast<int>(s);
          found_version = sl.version;
          break;
        }
      }
      if (found_bin >= 0) break;
    }
    if (found_bin < 0) {
      // record absence witnesses and report not-found (no abort)
      for (std::uint32_t bin : {key.bin0, key.bin1}) {
        auto snap = engine_.snapshot_bin(bin);
        CellRef ref{false, bin, 0};
        auto it = cells_.find(ref);
        if (it == cells_.end()) {
          CellEntry e;
          e.observed = snap.version;
          e.absent_keys.push_back(key.key);
          cells_.emplace(ref, e);
        } else {
          it->second.absent_keys.push_back(key.key);
        }
      }
      return OpStatus::NotFound;
    }

    if (planned_slots_.count({static_cast<std::uint32_t>(found_bin),
                              static_cast<std::uint32_t>(found_slot)})) {
      // The slot already belongs to one of this transaction's planned
      // chains; treat it like a claimed-slot conflict.
      abort(AbortCause::UpdateSawClaim);
      return OpStatus::Fail;
    }

    bool claimed = false;
    if (engine_.options().claim_flags) {
      if (!engine_.claim(found_bin, found_slot)) {
        abort(AbortCause::UpdateSawClaim);
        return OpStatus::Fail;
      }
      claimed = true;
      SlotState now = engine_.snapshot_slot(found_bin, found_slot);
      if (now.version != found_version) {
        if (now.occupied && now.key == key.key) {
          found_version = now.version;  // same record, newer version
        } else {
          engine_.unclaim(found_bin, found_slot);
          continue;  // the record moved; rescan
        }
      }
    }

    CellRef ref{true, static_cast<std::uint32_t>(found_bin),
                static_cast<std::uint32_t>(found_slot)};
    auto [it, fresh] = cells_.try_emplace(ref);
    if (fresh) it->second.observed = found_version;
    it->second.write = true;
    it->second.claimed = claimed;

    PendingUpdate pu;
    pu.key = key;
    pu.bin = static_cast<std::uint32_t>(found_bin);
    pu.slot = static_cast<std::uint32_t>(found_slot);
    pu.is_delete = is_delete;
    pu.payload = payload;
    pending_ops_[key.key] = -static_cast<std::int32_t>(updates_.size()) - 1;
    planned_slots_[{pu.bin, pu.slot}] =
        Overlay{!is_delete, key.key, payload, key.bin0, key.bin1};
    updates_.push_back(pu);
    return OpStatus::Planned;
  }
  abort(AbortCause::ReadSlotModified);
  return OpStatus::Fail;
}

// --------------------------------------------------------------------
// Stage 2: lock in global order and verify
// --------------------------------------------------------------------

ValidateResult Transaction::validate_and_lock() {
  if (status_ == TxnStatus::Aborted) return ValidateResult::Abort;
  if (status_ != TxnStatus::Planning)
    throw std::logic_error("validate_and_lock outside planning stage");
  status_ = TxnStatus::Validating;
  const EngineOptions& opt = engine_.options();

  std::vector<CellRef> write_cells;
  for (auto& [ref, e] : cells_)
    if (e.write) write_cells.push_back(ref);
  std::sort(write_cells.begin(), write_cells.end());  // bins before slots

  for (std::uint32_t pass = 0;; ++pass) {
    if (pass > opt.max_local_retries) {
      abort(AbortCause::RetryBudgetExhausted);
      return ValidateResult::Abort;
    }

    bool restart = false;
    for (const CellRef& ref : write_cells) {
      engine_.lock_cell(ref);
      locked_.push_back(ref);
      CellEntry& e = cells_[ref];
      std::uint64_t cur = engine_.ctrl_of(ref).load(
          std::memory_order_relaxed) >> TxnEngine::kVersionShift;
      if (cur == e.observed) continue;

      if (!ref.is_slot) {
        // Absence witness changed: re-verify in place (bins lock before
        // slots, so this is deadlock-free), adopt the new version.
        if (!opt.local_retries) {
          abort(AbortCause::AbsenceWitnessChanged);
          return ValidateResult::Abort;
        }
        ++local_retries_used_;
        bool appeared = false;
        for (std::uint64_t k : e.absent_keys) {
          for (std::uint32_t s = 0; s < engine_.bin_size() && !appeared;
               ++s) {
            SlotState sl = engine_.snapshot_slot(ref.bin, s);
            if (sl.occupied && sl.key == k) appeared = true;
          }
        }
        if (appeared) {
          abort(AbortCause::InsertAbsenceViolated);
          return ValidateResult::Abort;
        }
        e.observed = cur;
      } else {
        abort(AbortCause::WriteSlotModified);
        return ValidateResult::Abort;
      }
    }

    // Read-set validation.
    for (auto& [ref, e] : cells_) {
      if (e.write) continue;
      std::uint64_t word =
          engine_.ctrl_of(ref).load(std::memory_order_acquire);
      bool locked_by_other = (word & TxnEngine::kLock) != 0;
      std::uint64_t cur = word >> TxnEngine::kVersionShift;
      if (!locked_by_other && cur == e.observed) continue;

      if (!ref.is_slot && !e.absent_keys.empty() && opt.local_retries) {
        // Local retry: release every lock, re-verify the absences against
        // the bin's new version, then redo stage 2.
        for (const CellRef& held : locked_)
          engine_.unlock_cell_keep_version(held);
        locked_.clear();
        ++local_retries_used_;
        auto snap = engine_.snapshot_bin(ref.bin);
        for (std::uint64_t k : e.absent_keys) {
          for (const SlotState& sl : snap.slots) {
            if (sl.occupied && sl.key == k) {
              abort(AbortCause::InsertAbsenceViolated);
              return ValidateResult::Abort;
            }
          }
        }
        e.observed = snap.version;
        restart = true;
        break;
      }
      abort(ref.is_slot ? AbortCause::ReadSlotModified
                        : AbortCause::AbsenceWitnessChanged);
      return ValidateResult::Abort;
    }
    if (!restart) return ValidateResult::Ok;
  }
}

// --------------------------------------------------------------------
// Stage 3: apply, stamp, release
// --------------------------------------------------------------------

std::uint64_t Transaction::commit() {
  if (status_ != TxnStatus::Validating)
    throw std::logic_error("commit before successful validation");

  std::uint64_t max_seen = ctx_.prev_txn_id_;
  for (const auto& [ref, e] : cells_)
    max_seen = std::max(max_seen, e.observed);
  txn_id_ = max_seen + 1;

  CommitRecord rec;
  rec.txn_id = txn_id_;
  rec.thread_id = ctx_.thread_id_;
  std::int64_t occupied_delta = 0;

  for (PendingInsert& pi : inserts_) {
    if (pi.cancelled) continue;
    if (!pi.chain_applied_early) {
      for (std::size_t i = pi.chain.moves.size(); i-- > 0;) {
        const ChainMove& m = pi.chain.moves[i];
        SlotState moved = engine_.snapshot_slot_locked(m.from_bin, m.from_slot);
        moved.version = 0;
        engine_.store_slot(m.to_bin, m.to_slot, moved);
        SlotState empty;
        engine_.store_slot(m.from_bin, m.from_slot, empty);
        rec.writes.push_back({WriteOp::Place, m.to_bin, m.to_slot, moved.key,
                              moved.payload, moved.bin0, moved.bin1});
        rec.writes.push_back({WriteOp::Clear, m.from_bin, m.from_slot, 0, 0,
                              0, 0});
      }
    }
    SlotState fresh;
    fresh.occupied = true;
    fresh.key = pi.key.key;
    fresh.payload = pi.payload;
    fresh.bin0 = pi.key.bin0;
    fresh.bin1 = pi.key.bin1;
    engine_.store_slot(pi.target_bin, pi.target_slot, fresh);
    rec.writes.push_back({WriteOp::Place, pi.target_bin, pi.target_slot,
                          fresh.key, fresh.payload, fresh.bin0, fresh.bin1});
    ++occupied_delta;
  }

  for (const PendingUpdate& pu : updates_) {
    if (pu.is_delete) {
      SlotState empty;
      engine_.store_slot(pu.bin, pu.slot, empty);
      rec.writes.push_back({WriteOp::Clear, pu.bin, pu.slot, 0, 0, 0, 0});
      --occupied_delta;
    } else {
      SlotState cur = engine_.snapshot_slot_locked(pu.bin, pu.slot);
      cur.payload = pu.payload;
      engine_.store_slot(pu.bin, pu.slot, cur);
      rec.writes.push_back({WriteOp::SetPayload, pu.bin, pu.slot, pu.key.key,
                            pu.payload, pu.key.bin0, pu.key.bin1});
    }
  }

  for (const auto& [ref, e] : cells_) {
    if (!e.write) rec.reads.push_back({ref, e.observed});
  }

  // Stamp the transaction ID on every write cell and release. Unlocking
  // with a fresh version also drops the claim bit, so the bookkeeping is
  // cleared here rather than through release_claims (which could otherwise
  // race with a new claimer of the freshly released slot).
  for (const CellRef& ref : locked_) {
    engine_.unlock_cell(ref, txn_id_, /*clear_claim=*/true);
    auto it = cells_.find(ref);
    if (it != cells_.end()) it->second.claimed = false;
  }
  locked_.clear();
  release_claims();  // claims on cells that never got locked (none normally)

  if (occupied_delta != 0)
    engine_.occupied_.fetch_add(occupied_delta, std::memory_order_relaxed);
  ctx_.prev_txn_id_ = txn_id_;
  status_ = TxnStatus::Committed;
  engine_.log_commit(std::move(rec));
  return txn_id_;
}

// --------------------------------------------------------------------
// System-transaction kick-outs
// --------------------------------------------------------------------

bool TxnEngine::system_kickout(TxnContext& ctx, const KickoutChain& chain,
                               const std::vector<PlanCell>& cells) {
  if (chain.moves.empty()) return true;
  // cells = from-slots in move order, then the terminal slot
  std::vector<std::uint64_t> versions(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) versions[i] = cells[i].version;

  for (std::size_t i = chain.moves.size(); i-- > 0;) {
    const ChainMove& m = chain.moves[i];
    const std::uint64_t from_expect = versions[i];
    const std::uint64_t to_expect = versions[i + 1];

    CellRef from{true, m.from_bin, m.from_slot};
    CellRef to{true, m.to_bin, m.to_slot};
    CellRef first = std::min(from, to);
    CellRef second = std::max(from, to);
    lock_cell(first);
    if (!(first == second)) lock_cell(second);

    auto version_of = [&](const CellRef& ref) {
      return ctrl_of(ref).load(std::memory_order_relaxed) >> kVersionShift;
    };
    SlotState src = snapshot_slot_locked(m.from_bin, m.from_slot);
    SlotState dst = snapshot_slot_locked(m.to_bin, m.to_slot);
    const bool ok = version_of(from) == from_expect &&
                    version_of(to) == to_expect && src.occupied &&
                    src.key == m.key && !dst.occupied;
    if (!ok) {
      unlock_cell_keep_version(first);
      if (!(first == second)) unlock_cell_keep_version(second);
      return false;
    }

    src.version = 0;
    store_slot(m.to_bin, m.to_slot, src);
    SlotState empty;
    store_slot(m.from_bin, m.from_slot, empty);

    const std::uint64_t mini_id = std::max(from_expect, to_expect) + 1;
    // the destination's content is final; its claim is released with it
    unlock_cell(to, mini_id, /*clear_claim=*/true);
    unlock_cell(from, mini_id, /*clear_claim=*/false);
    versions[i] = mini_id;  // the from-slot is the next move's destination

    if (options_.record_commits) {
      CommitRecord rec;
      rec.txn_id = mini_id;
      rec.thread_id = ctx.thread_id();
      rec.writes.push_back({WriteOp::Place, m.to_bin, m.to_slot, src.key,
                            src.payload, src.bin0, src.bin1});
      rec.writes.push_back({WriteOp::Clear, m.from_bin, m.from_slot, 0, 0, 0,
                            0});
      log_commit(std::move(rec));
    }
  }
  return true;
}

SlotState TxnEngine::snapshot_slot_locked(std::uint32_t bin,
                                          std::uint32_t slot) const {
  auto& c = const_cast<SlotCell&>(slot_cell(bin, slot));
  SlotState s;
  s.key = std::atomic_ref<std::uint64_t>(c.key).load(std::memory_order_relaxed);
  s.payload =
      std::atomic_ref<std::uint64_t>(c.payload).load(std::memory_order_relaxed);
  s.bin0 = std::atomic_ref<std::uint32_t>(c.bin0).load(std::memory_order_relaxed);
  s.bin1 = std::atomic_ref<std::uint32_t>(c.bin1).load(std::memory_order_relaxed);
  s.occupied = std::atomic_ref<std::uint32_t>(c.occupied)
                   .load(std::memory_order_relaxed) != 0;
  std::uint64_t word = c.ctrl.load(std::memory_order_relaxed);
  s.version = word >> kVersionShift;
  s.claimed = (word & kClaim) != 0;
  s.locked = (word & kLock) != 0;
  return s;
}

// --------------------------------------------------------------------
// Workload driver
// --------------------------------------------------------------------

AbortStats TxnEngine::run_workload(const WorkloadSpec& spec) {
  std::vector<AbortStats> per_thread(spec.threads);
  std::vector<std::thread> threads;

  auto worker = [&](std::uint32_t tid) {
    TxnContext ctx(*this, tid, mix_seed(spec.seed, tid + 1));
    AbortStats& stats = per_thread[tid];
    std::vector<TxnKey> history;
    std::uint64_t next_key = 1;
    std::uint64_t txns_done = 0;

    struct Intent {
      enum Kind : std::uint8_t { Insert, Delete, Overwrite, Read } kind;
      TxnKey key;
      std::uint64_t payload;
    };
    const std::uint32_t wsum = spec.ratio_insert + spec.ratio_delete +
                               spec.ratio_overwrite + spec.ratio_read;
    std::vector<Intent> intents;

    while (density() < spec.target_density &&
           (spec.max_txns_per_thread == 0 ||
            txns_done < spec.max_txns_per_thread)) {
      intents.clear();
      for (std::uint32_t i = 0; i < spec.ops_per_txn; ++i) {
        std::uint32_t roll = ctx.rng().below32(wsum);
        Intent intent{};
        const bool want_insert = roll < spec.ratio_insert || history.empty();
        if (want_insert) {
          intent.kind = Intent::Insert;
          intent.key.key = (std::uint64_t{tid} << 40) | next_key++;
          intent.key.bin0 = ctx.rng().below32(num_bins_);
          do {
            intent.key.bin1 = ctx.rng().below32(num_bins_);
          } while (intent.key.bin1 == intent.key.bin0);
          intent.payload = ctx.rng().next();
        } else {
          intent.key = history[ctx.rng().below(history.size())];
          if (roll < spec.ratio_insert + spec.ratio_delete)
            intent.kind = Intent::Delete;
          else if (roll <
                   spec.ratio_insert + spec.ratio_delete + spec.ratio_overwrite) {
            intent.kind = Intent::Overwrite;
            intent.payload = ctx.rng().next();
          } else {
            intent.kind = Intent::Read;
          }
        }
        intents.push_back(intent);
      }

      std::uint32_t backoff = 0;
      for (;;) {
        const double density_at_start = density();
        Transaction txn = ctx.begin();
        for (const Intent& intent : intents) {
          switch (intent.kind) {
            case Intent::Insert:
              txn.insert(intent.key, intent.payload);
              break;
            case Intent::Delete:
              txn.erase(intent.key);
              break;
            case Intent::Overwrite:
              txn.overwrite(intent.key, intent.payload);
              break;
            case Intent::Read:
              txn.read(intent.key);
              break;
          }
          if (txn.status() == TxnStatus::Aborted) break;
        }
        if (txn.status() != TxnStatus::Aborted &&
            txn.validate_and_lock() == ValidateResult::Ok) {
          txn.commit();
          stats.record_commit();
          for (const Intent& intent : intents)
            if (intent.kind == Intent::Insert) history.push_back(intent.key);
          break;
        }
        stats.record_abort(density_at_start,
                           txn.abort_cause().value_or(AbortCause::BinExhausted));
        if (density() >= spec.target_density) break;  // give up at the cap
        // Randomized backoff breaks mutual-abort cycles between claim
        // holders retrying in lockstep.
        if (spec.threads > 1) {
          backoff = std::min(backoff + 1, 10u);
          std::uint64_t spins = ctx.rng().below(1ull << backoff);
          for (std::uint64_t i = 0; i < spins; ++i) std::this_thread::yield();
        }
      }
      ++txns_done;
    }
  };

  if (spec.threads == 1) {
    worker(0);
  } else {
    threads.reserve(spec.threads);
    for (std::uint32_t t = 0; t < spec.threads; ++t)
      threads.emplace_back(worker, t);
    for (std::thread& t : threads) t.join();
  }

  AbortStats merged;
  for (const AbortStats& s : per_thread) merged.merge(s);
  return merged;
}

}  // namespace cuckoo::txn
