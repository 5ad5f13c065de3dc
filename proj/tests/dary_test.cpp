#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "cuckoo/dary.hpp"
#include "cuckoo/search.hpp"
#include "oracles.hpp"
#include "util.hpp"

using namespace cuckoo;
using namespace cuckoo::testing;

namespace {

// Fill a single-slot table with the given insert function; returns the
// number of records stored.
template <class InsertFn>
std::uint64_t dary_fill(Table& t, double target, InsertFn&& ins) {
  std::uint64_t key = 1;
  while (t.density() < target) {
    if (!ins(t, t.random_entry(key++, 0)).success) break;
  }
  return t.occupied();
}

}  // namespace

TEST_CASE("rattle places into the selected hash bin") {
  Table t = make_dary_table(16, 4, Policy::Rattle, 1);

  SUBCASE("empty target: counter unchanged, chain 0") {
    KeyEntry k = make_entry(1, {3, 7, 9, 12});
    auto out = insert_rattle(t, k);
    CHECK(out.success);
    CHECK(out.metrics.chain_length == 0);
    CHECK(out.metrics.bins_viewed == 1);  // only h0 fetched
    CHECK(t.slot(3, 0).occupied);
    CHECK(t.slot(3, 0).entry.rattle == 0);
  }
  SUBCASE("higher counter wins the contest") {
    KeyEntry incumbent = make_entry(10, {3, 7, 9, 12});
    incumbent.rattle = 1;
    t.place(7, 0, incumbent);
    KeyEntry k = make_entry(1, {9, 8, 7, 12});  // h[2] = bin 7
    k.rattle = 2;
    auto out = insert_rattle(t, k);
    CHECK(out.success);
    // incoming r=2 beats incumbent r=1: incumbent evicted with r=2
    CHECK(t.slot(7, 0).entry.key == 1);
    REQUIRE(!out.steps.empty());
    REQUIRE(out.steps[0].evicted.has_value());
    CHECK(out.steps[0].evicted->key == 10);
    CHECK(out.steps[0].evicted->rattle == 2);
    // the displaced incumbent landed at its h[2 mod 4] = bin 9
    CHECK(t.slot(9, 0).entry.key == 10);
  }
  SUBCASE("ties keep the incumbent") {
    KeyEntry incumbent = make_entry(10, {3, 7, 9, 12});
    t.place(3, 0, incumbent);
    KeyEntry k = make_entry(1, {3, 7, 9, 12});
    auto out = insert_rattle(t, k);
    CHECK(out.success);
    CHECK(t.slot(3, 0).entry.key == 10);  // incumbent stayed
    CHECK(t.slot(7, 0).entry.key == 1);   // incoming rattled to h1
    CHECK(t.slot(7, 0).entry.rattle == 1);
  }
}

TEST_CASE("rattle residence invariant: bin equals h[r mod d]") {
  Table t = make_dary_table(1024, 4, Policy::Rattle, 5);
  dary_fill(t, 0.9, [](Table& tb, const KeyEntry& k) {
    return insert_rattle(tb, k);
  });
  for (std::uint32_t b = 0; b < t.num_bins(); ++b) {
    const Slot& s = t.slot(b, 0);
    if (!s.occupied) continue;
    CHECK(s.entry.hashes[s.entry.rattle % 4] == b);
  }
}

TEST_CASE("rattle counters stay balanced") {
  Table t = make_dary_table(1024, 4, Policy::Rattle, 9);
  dary_fill(t, 0.9, [](Table& tb, const KeyEntry& k) {
    return insert_rattle(tb, k);
  });
  std::vector<std::uint32_t> counters;
  for (std::uint32_t b = 0; b < t.num_bins(); ++b)
    if (t.slot(b, 0).occupied) counters.push_back(t.slot(b, 0).entry.rattle);
  std::sort(counters.begin(), counters.end());
  const std::uint32_t lo = counters[counters.size() / 20];        // p5
  const std::uint32_t hi = counters[counters.size() * 19 / 20];   // p95
  CHECK(hi - lo <= 4 + 2);
  CHECK(mean_hashes_used(t) > 1.0);
  CHECK(mean_hashes_used(t) <= 4.0);
}

TEST_CASE("khosla follows the min-label rule") {
  Table t = make_dary_table(16, 4, Policy::Khosla, 1);

  SUBCASE("empty candidate wins and is re-labelled") {
    t.place(4, 0, make_entry(10, {4, 5, 6, 7}));
    t.place(5, 0, make_entry(11, {5, 6, 7, 8}));
    t.place(6, 0, make_entry(12, {6, 7, 8, 9}));
    auto out = insert_khosla(t, make_entry(1, {4, 5, 6, 7}));
    CHECK(out.success);
    CHECK(out.metrics.chain_length == 0);
    CHECK(out.metrics.bins_viewed == 4);  // all labels read
    CHECK(t.slot(7, 0).entry.key == 1);
    // filled bin estimates one move past its cheapest alternative
    CHECK(t.bin_meta(7).khosla_label == 1);
    for (std::uint32_t b = 4; b <= 6; ++b)
      CHECK(t.bin_meta(b).khosla_label == 0);
  }
  SUBCASE("labels {2,0,1,3}: the 0-label bin is chosen") {
    for (std::uint32_t b = 4; b <= 7; ++b)
      t.place(b, 0, make_entry(10 + b, {b, b + 4, b + 5, b + 6}));
    t.bin_meta(4).khosla_label = 2;
    t.bin_meta(5).khosla_label = 0;
    t.bin_meta(6).khosla_label = 1;
    t.bin_meta(7).khosla_label = 3;
    auto out = insert_khosla(t, make_entry(1, {4, 5, 6, 7}));
    CHECK(out.success);
    REQUIRE(!out.steps.empty());
    CHECK(out.steps[0].bin == 5);
    // new label = min over the other candidates {2,1,3} plus one
    CHECK(t.bin_meta(5).khosla_label == 2);
    CHECK(t.slot(5, 0).entry.key == 1);
  }
}

TEST_CASE("khosla labels never decrease across a fill") {
  Table t = make_dary_table(512, 4, Policy::Khosla, 3);
  std::vector<std::uint32_t> prev(t.num_bins(), 0);
  std::uint64_t key = 1;
  int step = 0;
  while (t.density() < 0.95) {
    if (!insert_khosla(t, t.random_entry(key++, 0)).success) break;
    if (++step % 50 == 0) {
      for (std::uint32_t b = 0; b < t.num_bins(); ++b) {
        CHECK(t.bin_meta(b).khosla_label >= prev[b]);
        prev[b] = t.bin_meta(b).khosla_label;
      }
    }
  }
  CHECK(t.density() >= 0.95);
}

TEST_CASE("random d-ary kicking never bounces straight back") {
  Table t = make_dary_table(256, 4, Policy::RandomKick, 7);
  std::uint64_t key = 1;
  while (t.density() < 0.9) {
    auto out = insert_random_dary(t, t.random_entry(key++, 0));
    if (!out.success) break;
    for (std::size_t i = 1; i < out.steps.size(); ++i)
      CHECK(out.steps[i].bin != out.steps[i - 1].bin);
  }
  CHECK(residency_ok(t));
}

TEST_CASE("near-empty d-ary inserts view fewer than d bins") {
  Table t = make_dary_table(256, 4, Policy::RandomKick, 7);
  std::uint64_t views = 0;
  std::uint64_t n = 0;
  std::uint64_t key = 1;
  while (t.density() < 0.2) {
    auto out = insert_random_dary(t, t.random_entry(key++, 0));
    REQUIRE(out.success);
    views += out.metrics.bins_viewed;
    ++n;
  }
  CHECK(static_cast<double>(views) / static_cast<double>(n) < 4.0);
}

TEST_CASE("search planners run unchanged on single-slot tables") {
  // plan_bfs against the generic exhaustive oracle, d-ary geometry
  Rng seeds(77);
  for (int trial = 0; trial < 100; ++trial) {
    Table t = make_dary_table(12 + seeds.below32(20), 4, Policy::RandomKick,
                              seeds.next());
    std::uint64_t key = 1;
    while (t.density() < 0.8) {
      if (!insert_random_dary(t, t.random_entry(key++, 0)).success) break;
    }
    KeyEntry k = t.random_entry(900'000, 0);
    auto plan = plan_bfs(t, k, SearchLimits{5000, 1});
    if (plan.found && plan.metrics.chain_length <= 6) {
      CHECK(oracle_min_evictions(t, k, 6) ==
            static_cast<int>(plan.metrics.chain_length));
    }
    if (plan.found) {
      apply_chain(t, plan.chain);
      t.place(plan.chain.root_bin(), plan.chain.root_slot(), k);
      CHECK(residency_ok(t));
    }
  }
}
