#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "cuckoo/detail/plan_impl.hpp"
#include "cuckoo/policy.hpp"
#include "cuckoo/search.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace cuckoo;
using namespace cuckoo::testing;

namespace {

// Random reachable state: keys placed directly into free slots of their
// hashed bins (no eviction machinery involved).
void scatter_fill(Table& t, Rng& rng, double target) {
  std::uint64_t key = 1000;
  int misses = 0;
  while (t.density() < target && misses < 200) {
    KeyEntry e = t.random_entry(key++, 0);
    std::vector<std::uint32_t> free;
    for (std::uint32_t b : e.bins())
      if (t.free_slot(b) >= 0) free.push_back(b);
    if (free.empty()) {
      ++misses;
      continue;
    }
    std::uint32_t b = free[rng.below32(static_cast<std::uint32_t>(free.size()))];
    t.place(b, static_cast<std::uint32_t>(t.free_slot(b)), e);
  }
}

struct RecordingView {
  SerialView inner;
  std::vector<std::uint32_t> fetched;

  std::uint32_t num_bins() const { return inner.num_bins(); }
  std::uint32_t bin_size() const { return inner.bin_size(); }
  std::uint32_t num_hashes() const { return inner.num_hashes(); }
  bool ghosts() const { return inner.ghosts(); }
  std::uint8_t spawn_count(std::uint32_t b) const {
    return inner.spawn_count(b);
  }
  void note_spawn(std::uint32_t b) { inner.note_spawn(b); }
  BinSnap fetch_bin(std::uint32_t b) {
    fetched.push_back(b);
    return inner.fetch_bin(b);
  }
};

bool same_chain(const PlanResult& a, const PlanResult& b) {
  if (a.found != b.found) return false;
  if (a.chain.moves.size() != b.chain.moves.size()) return false;
  for (std::size_t i = 0; i < a.chain.moves.size(); ++i) {
    const auto& ma = a.chain.moves[i];
    const auto& mb = b.chain.moves[i];
    if (ma.from_bin != mb.from_bin || ma.from_slot != mb.from_slot ||
        ma.to_bin != mb.to_bin || ma.to_slot != mb.to_slot ||
        ma.key != mb.key)
      return false;
  }
  return a.chain.terminal_bin == b.chain.terminal_bin &&
         a.chain.terminal_slot == b.chain.terminal_slot;
}

}  // namespace

TEST_CASE("free root bin yields a trivial plan") {
  Table t(small_config(16, 4, 2, Policy::Bfs));
  t.place(2, 0, make_entry(10, {2, 6}));
  auto plan = plan_bfs(t, make_entry(1, {2, 5}));
  CHECK(plan.found);
  CHECK(plan.chain.moves.empty());
  CHECK(plan.metrics.chain_length == 0);
  CHECK(plan.metrics.bins_viewed == 2);
  // load balancing: bin 5 is empty, bin 2 holds one record
  CHECK(plan.chain.terminal_bin == 5);
}

TEST_CASE("bfs finds the handcrafted shortest chain") {
  // Single-slot bins 0..5; the short branch runs through bin 3 to the free
  // bin 5.
  Table t(small_config(6, 1, 2, Policy::RandomKick));
  t.place(0, 0, make_entry(10, {0, 2}));
  t.place(1, 0, make_entry(11, {1, 3}));
  t.place(2, 0, make_entry(12, {2, 4}));
  t.place(3, 0, make_entry(13, {3, 5}));
  t.place(4, 0, make_entry(14, {4, 0}));
  KeyEntry k = make_entry(1, {0, 1});

  const int best = oracle_min_evictions(t, k, 6);
  REQUIRE(best == 2);
  auto plan = plan_bfs(t, k, SearchLimits{100, 1});
  REQUIRE(plan.found);
  CHECK(plan.metrics.chain_length == 2);
  CHECK(plan.chain.moves.size() == 2);
  // apply it and place the key: everything stays in legal bins
  apply_chain(t, plan.chain);
  t.place(plan.chain.root_bin(), plan.chain.root_slot(), k);
  CHECK(residency_ok(t));
  CHECK(t.occupied() == 6);
}

TEST_CASE("bfs equals the exhaustive minimum on random instances") {
  Rng seeds(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const bool single = trial % 2 == 0;
    TableConfig cfg = small_config(8 + seeds.below32(17),
                                   single ? 1 : 2, single ? 3 : 2,
                                   Policy::RandomKick, false, seeds.next());
    Table t(cfg);
    Rng rng(seeds.next());
    scatter_fill(t, rng, 0.8);
    KeyEntry k = t.random_entry(1, 0);
    auto plan = plan_bfs(t, k, SearchLimits{5000, 1});
    if (plan.found) {
      int best = oracle_min_evictions(t, k, 7);
      if (plan.metrics.chain_length <= 7) {
        REQUIRE(best == static_cast<int>(plan.metrics.chain_length));
      }
    } else {
      CHECK(oracle_min_evictions(t, k, 5) == -1);
    }
  }
}

TEST_CASE("spawn accounting: counters, children, repeat searches") {
  // Every bin full, so searches spawn until the cap instead of finding a
  // terminal.
  Table t(small_config(12, 2, 2, Policy::RandomKick));
  for (std::uint32_t b = 0; b < 4; ++b) {
    t.place(b, 0, make_entry(10 + b * 2, {b, b + 4}));
    t.place(b, 1, make_entry(11 + b * 2, {b, b + 8}));
  }
  for (std::uint32_t b = 4; b < 12; ++b) {
    t.place(b, 0, make_entry(40 + b * 2, {b, (b + 1) % 12}));
    t.place(b, 1, make_entry(41 + b * 2, {b, (b + 5) % 12}));
  }

  SUBCASE("spawning a bin's records in two searches counts twice") {
    auto first = plan_bfs(t, make_entry(1, {0, 1}), SearchLimits{1, 1});
    CHECK(!first.found);
    CHECK(first.metrics.spawns == 1);
    CHECK(t.bin_meta(0).spawn_count == 1);
    auto second = plan_bfs(t, make_entry(2, {0, 1}), SearchLimits{1, 1});
    CHECK(!second.found);
    CHECK(t.bin_meta(0).spawn_count == 2);
    CHECK(t.total_spawns() == 2);
  }
  SUBCASE("per-bin counters sum to the spawn total") {
    auto plan = plan_bfs(t, make_entry(1, {0, 1}), SearchLimits{3, 1});
    CHECK(plan.metrics.spawns == 3);
    std::uint64_t sum = 0;
    for (std::uint32_t b = 0; b < t.num_bins(); ++b)
      sum += t.bin_meta(b).spawn_count;
    CHECK(sum == 3);
    CHECK(t.total_spawns() == 3);
  }
}

TEST_CASE("searches never fetch a bin twice") {
  TableConfig cfg = small_config(128, 4, 2, Policy::SortedSearch, false, 7);
  Table t(cfg);
  Rng rng(3);
  scatter_fill(t, rng, 0.93);
  for (int i = 0; i < 50; ++i) {
    KeyEntry k = t.random_entry(10'000 + i, 0);
    for (FrontierOrder order :
         {FrontierOrder::Fifo, FrontierOrder::SpawnCount,
          FrontierOrder::DepthThenSpawnCount}) {
      RecordingView view{SerialView{t}, {}};
      (void)plan_kickout(view, k, order, SearchLimits{500, 1});
      std::set<std::uint32_t> uniq(view.fetched.begin(), view.fetched.end());
      REQUIRE(uniq.size() == view.fetched.size());
    }
  }
}

TEST_CASE("frontier pop order matches a naive scan") {
  Rng rng(55);
  for (FrontierOrder order :
       {FrontierOrder::Fifo, FrontierOrder::SpawnCount,
        FrontierOrder::DepthThenSpawnCount}) {
    Frontier f(order);
    struct Entry {
      std::uint32_t idx, depth;
      std::uint8_t spawn;
      std::uint64_t seq;
    };
    std::vector<Entry> model;
    std::uint64_t seq = 0;
    std::uint32_t next_idx = 0;
    for (int step = 0; step < 2000; ++step) {
      if (f.empty() || rng.unit() < 0.6) {
        Entry e{next_idx++, rng.below32(4),
                static_cast<std::uint8_t>(rng.below32(6)), seq++};
        model.push_back(e);
        f.push(e.idx, e.depth, e.spawn);
      } else {
        auto better = [&](const Entry& a, const Entry& b) {
          auto key = [&](const Entry& e) -> std::tuple<std::uint64_t,
                                                       std::uint64_t,
                                                       std::uint64_t> {
            switch (order) {
              case FrontierOrder::Fifo: return {0, 0, e.seq};
              case FrontierOrder::SpawnCount: return {e.spawn, 0, e.seq};
              case FrontierOrder::DepthThenSpawnCount:
                return {e.depth, e.spawn, e.seq};
            }
            return {0, 0, e.seq};
          };
          return key(a) < key(b);
        };
        std::size_t best = 0;
        for (std::size_t i = 1; i < model.size(); ++i)
          if (better(model[i], model[best])) best = i;
        REQUIRE(f.pop() == model[best].idx);
        model.erase(model.begin() + static_cast<std::ptrdiff_t>(best));
      }
    }
  }
}

TEST_CASE("sorted search degenerates to bfs on a fresh table") {
  // all spawn counts are zero, so SpawnCount order == insertion order
  TableConfig cfg = small_config(64, 4, 2, Policy::SortedSearch, false, 21);
  for (int i = 0; i < 20; ++i) {
    Table fresh_a(cfg), fresh_b(cfg);
    Rng r1(i), r2(i);
    scatter_fill(fresh_a, r1, 0.9);
    scatter_fill(fresh_b, r2, 0.9);
    KeyEntry k = fresh_a.random_entry(5000 + i, 0);
    auto sorted = plan_sorted(fresh_a, k);
    auto bfs = plan_bfs(fresh_b, k);
    CHECK(same_chain(sorted, bfs));
    CHECK(sorted.metrics.bins_viewed == bfs.metrics.bins_viewed);
  }
}

TEST_CASE("fifo-ordered search reproduces plan_bfs on a used table") {
  TableConfig cfg = small_config(128, 4, 2, Policy::SortedSearch, false, 31);
  Table t(cfg);
  std::uint64_t key = 1;
  while (t.density() < 0.9) {
    if (!insert_with_policy(t, t.random_entry(key++, 0)).success) break;
  }
  // spawn counts now differ between bins; FIFO ordering must still equal
  // plan_bfs exactly, chain and metrics both
  for (int i = 0; i < 25; ++i) {
    KeyEntry k = t.random_entry(90'000 + i, 0);
    Table copy_a = t;
    Table copy_b = t;
    auto via_order = plan_search(copy_a, k, FrontierOrder::Fifo);
    auto via_bfs = plan_bfs(copy_b, k);
    CHECK(same_chain(via_order, via_bfs));
    CHECK(via_order.metrics.bins_viewed == via_bfs.metrics.bins_viewed);
    CHECK(via_order.metrics.spawns == via_bfs.metrics.spawns);
  }
}

TEST_CASE("hybrid equals bfs when all spawn counts tie") {
  TableConfig cfg = small_config(64, 4, 2, Policy::Hybrid, false, 61);
  for (int i = 0; i < 20; ++i) {
    Table a(cfg), b(cfg);
    Rng r1(100 + i), r2(100 + i);
    scatter_fill(a, r1, 0.9);
    scatter_fill(b, r2, 0.9);
    KeyEntry k = a.random_entry(7000 + i, 0);
    CHECK(same_chain(plan_hybrid(a, k), plan_bfs(b, k)));
  }
}

TEST_CASE("hybrid chains are never shorter than bfs optima") {
  TableConfig cfg = small_config(128, 4, 2, Policy::Hybrid, false, 77);
  Table t(cfg);
  std::uint64_t key = 1;
  while (t.density() < 0.93) {
    if (!insert_with_policy(t, t.random_entry(key++, 0)).success) break;
  }
  for (int i = 0; i < 40; ++i) {
    KeyEntry k = t.random_entry(50'000 + i, 0);
    Table ca = t, cb = t;
    auto hybrid = plan_hybrid(ca, k);
    auto bfs = plan_bfs(cb, k);
    if (hybrid.found && bfs.found)
      CHECK(hybrid.metrics.chain_length >= bfs.metrics.chain_length);
  }
}

TEST_CASE("spawn-count bookkeeping sums match across a fill") {
  TableConfig cfg = small_config(256, 4, 2, Policy::SortedSearch, false, 13);
  Table t(cfg);
  std::uint64_t key = 1;
  while (t.density() < 0.95) {
    if (!insert_with_policy(t, t.random_entry(key++, 0)).success) break;
  }
  std::uint64_t sum = 0;
  std::uint8_t max_count = 0;
  for (std::uint32_t b = 0; b < t.num_bins(); ++b) {
    sum += t.bin_meta(b).spawn_count;
    max_count = std::max(max_count, t.bin_meta(b).spawn_count);
  }
  REQUIRE(max_count < 255);  // saturation would invalidate the comparison
  CHECK(sum == t.total_spawns());
}

TEST_CASE("apply_chain rejects stale chains") {
  Table t(small_config(6, 1, 2, Policy::RandomKick));
  t.place(0, 0, make_entry(10, {0, 2}));
  t.place(1, 0, make_entry(11, {1, 3}));
  t.place(2, 0, make_entry(12, {2, 4}));
  t.place(3, 0, make_entry(13, {3, 5}));
  t.place(4, 0, make_entry(14, {4, 0}));
  KeyEntry k = make_entry(1, {0, 1});
  auto plan = plan_bfs(t, k);
  REQUIRE(plan.found);
  // another insertion steals the terminal slot before application
  t.place(plan.chain.terminal_bin, plan.chain.terminal_slot,
          make_entry(99, {plan.chain.terminal_bin, 0}));
  CHECK_THROWS_AS(apply_chain(t, plan.chain), StaleChainError);
}

TEST_CASE("search chains may end at a duplicate and promote its twin") {
  Table t(small_config(10, 1, 2, Policy::RandomKick, true));
  // chain: root bins 0,1 full; record in 0 leads to bin 2 holding a
  // duplicate whose twin lives in bin 6
  KeyEntry dup = make_entry(42, {2, 6}, 7);
  t.place(0, 0, make_entry(10, {0, 2}));
  t.place(1, 0, make_entry(11, {1, 7}));
  t.place(7, 0, make_entry(12, {7, 1}));
  t.place(2, 0, dup, true);
  t.place(6, 0, dup, true);

  auto out = insert_search(t, make_entry(1, {0, 1}), FrontierOrder::SpawnCount);
  REQUIRE(out.success);
  CHECK(out.steps.back().promoted_duplicate);
  CHECK(count_copies(t, 42) == 1);
  CHECK(!t.slot(6, 0).duplicate);
  CHECK(residency_ok(t));
  CHECK(ghost_copies_ok(t));
  REQUIRE(out.terminal_prechain_duplicate.has_value());
  CHECK(*out.terminal_prechain_duplicate);
}

TEST_CASE("batched sorted search still terminates and applies") {
  TableConfig cfg = small_config(128, 4, 2, Policy::SortedSearch, false, 19);
  Table t(cfg);
  std::uint64_t key = 1;
  while (t.density() < 0.9) {
    if (!insert_with_policy(t, t.random_entry(key++, 0)).success) break;
  }
  for (std::uint32_t batch : {1u, 4u}) {
    Table copy = t;
    KeyEntry k = copy.random_entry(123'456 + batch, 0);
    auto out = insert_search(copy, k, FrontierOrder::SpawnCount,
                             SearchLimits{2000, batch});
    CHECK(out.success);
    CHECK(residency_ok(copy));
  }
}

TEST_CASE("search insertion keeps the steps/chain bookkeeping consistent") {
  TableConfig cfg = small_config(128, 4, 2, Policy::Bfs, false, 23);
  Table t(cfg);
  std::uint64_t key = 1;
  while (t.density() < 0.95) {
    auto out = insert_with_policy(t, t.random_entry(key++, 0));
    if (!out.success) break;
    CHECK(out.steps.size() == out.metrics.chain_length + 1);
    CHECK(out.metrics.chain_length <= out.metrics.bins_viewed);
  }
  CHECK(residency_ok(t));
}
