#include "cuckoo/search.hpp"

#include "cuckoo/detail/plan_impl.hpp"

namespace cuckoo {

void Frontier::push(std::uint32_t arena_index, std::uint32_t depth,
                    std::uint8_t spawn_key) {
  std::uint64_t primary = 0;
  switch (order_) {
    case FrontierOrder::Fifo:
      primary = 0;
      break;
    case FrontierOrder::SpawnCount:
      primary = spawn_key;
      break;
    case FrontierOrder::DepthThenSpawnCount:
      primary = (std::uint64_t{depth} << 8) | spawn_key;
      break;
  }
  heap_.push(Item{primary, next_seq_++, arena_index});
}

std::uint32_t Frontier::pop() {
  Item top = heap_.top();
  heap_.pop();
  return top.index;
}

VisitedSet::VisitedSet(std::size_t expected) {
  std::size_t cap = 16;
  while (cap < expected * 2) cap <<= 1;
  cells_.assign(cap, kEmpty);
}

void VisitedSet::grow() {
  std::vector<std::uint32_t> old = std::move(cells_);
  cells_.assign(old.size() * 2, kEmpty);
  count_ = 0;
  for (std::uint32_t v : old)
    if (v != kEmpty) insert(v);
}

bool VisitedSet::insert(std::uint32_t bin) {
  if ((count_ + 1) * 10 >= cells_.size() * 7) grow();
  const std::size_t mask = cells_.size() - 1;
  std::size_t i = bin & mask;
  while (cells_[i] != kEmpty) {
    if (cells_[i] == bin) return false;
    i = (i + 1) & mask;
  }
  cells_[i] = bin;
  ++count_;
  return true;
}

bool VisitedSet::contains(std::uint32_t bin) const {
  const std::size_t mask = cells_.size() - 1;
  std::size_t i = bin & mask;
  while (cells_[i] != kEmpty) {
    if (cells_[i] == bin) return true;
    i = (i + 1) & mask;
  }
  return false;
}

PlanResult plan_search(Table& table, const KeyEntry& key, FrontierOrder order,
                       SearchLimits limits) {
  SerialView view{table};
  return plan_kickout(view, key, order, limits);
}

PlanResult plan_bfs(Table& table, const KeyEntry& key, SearchLimits limits) {
  return plan_search(table, key, FrontierOrder::Fifo, limits);
}

PlanResult plan_sorted(Table& table, const KeyEntry& key,
                       SearchLimits limits) {
  return plan_search(table, key, FrontierOrder::SpawnCount, limits);
}

PlanResult plan_hybrid(Table& table, const KeyEntry& key,
                       SearchLimits limits) {
  return plan_search(table, key, FrontierOrder::DepthThenSpawnCount, limits);
}

void apply_chain(Table& table, const KickoutChain& chain) {
  if (chain.terminal_duplicate) {
    const Slot& t = table.slot(chain.terminal_bin, chain.terminal_slot);
    if (!t.occupied || !t.duplicate || t.entry.key != chain.terminal_key)
      throw StaleChainError{};
    const KeyEntry ghost = t.entry;
    promote_duplicate(table, ghost, ghost.other_bin(chain.terminal_bin));
  } else {
    if (table.slot(chain.terminal_bin, chain.terminal_slot).occupied)
      throw StaleChainError{};
  }

  for (std::size_t i = chain.moves.size(); i-- > 0;) {
    const ChainMove& m = chain.moves[i];
    const Slot& from = table.slot(m.from_bin, m.from_slot);
    if (!from.occupied || from.duplicate || from.entry.key != m.key)
      throw StaleChainError{};
    if (table.slot(m.to_bin, m.to_slot).occupied) throw StaleChainError{};
    const KeyEntry entry = from.entry;
    table.place(m.to_bin, m.to_slot, entry);
    table.clear(m.from_bin, m.from_slot);
  }
}

WalkOutcome insert_search(Table& table, const KeyEntry& key,
                          FrontierOrder order, SearchLimits limits) {
  PlanResult plan = plan_search(table, key, order, limits);
  WalkOutcome out;
  out.metrics = plan.metrics;
  if (!plan.found) {
    out.success = false;
    out.homeless = key;
    return out;
  }
  apply_chain(table, plan.chain);
  table.place(plan.chain.root_bin(), plan.chain.root_slot(), key);

  for (const ChainMove& m : plan.chain.moves) {
    WalkStep st;
    st.bin = m.from_bin;
    st.slot = m.from_slot;
    st.evicted = table.slot(m.to_bin, m.to_slot).entry;
    out.steps.push_back(st);
  }
  WalkStep last;
  last.bin = plan.chain.terminal_bin;
  last.slot = plan.chain.terminal_slot;
  last.promoted_duplicate = plan.chain.terminal_duplicate;
  out.steps.push_back(last);

  if (out.metrics.chain_length >= 1)
    out.terminal_prechain_duplicate = plan.terminal_bin_had_duplicate;
  return out;
}

}  // namespace cuckoo
