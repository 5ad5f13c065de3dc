#pragma once

#include "cuckoo/policy.hpp"

namespace cuckoo::bench {

struct FillOptions {
  WalkLimits walk{100000};        // experiment fills avoid tail censoring
  SearchLimits search{20000, 1};
  std::uint32_t max_consecutive_failures = 200;
};

struct FillSummary {
  std::uint64_t inserts = 0;
  std::uint64_t failures = 0;  // capped walks / exhausted searches
  double final_density = 0;
};

// Fills the table with fresh random keys until the occupied-slot target;
// the callback sees (density before the insert, outcome) for every
// successful insertion. Failed insertions are skipped, counted, and the
// fill continues with new keys.
template <class Cb>
FillSummary fill_to_density(Table& table, double target,
                            const FillOptions& opt, Cb&& cb) {
  FillSummary sum;
  const std::uint64_t want = static_cast<std::uint64_t>(
      target * static_cast<double>(table.capacity()) + 1e-9);
  std::uint64_t next_key = 1;
  std::uint32_t consecutive_failures = 0;
  while (table.occupied() < want) {
    const double before = table.density();
    KeyEntry e = table.random_entry(next_key++, table.rng().next());
    WalkOutcome out = insert_with_policy(table, e, opt.walk, opt.search);
    if (out.success) {
      consecutive_failures = 0;
      ++sum.inserts;
      cb(before, out);
    } else {
      ++sum.failures;
      if (++consecutive_failures > opt.max_consecutive_failures) break;
    }
  }
  sum.final_density = table.density();
  return sum;
}

inline FillSummary fill_to_density(Table& table, double target,
                                   const FillOptions& opt = {}) {
  return fill_to_density(table, target, opt,
                         [](double, const WalkOutcome&) {});
}

}  // namespace cuckoo::bench
