#pragma once

#include <string>
#include <vector>

#include "cuckoo/bench/experiments.hpp"

namespace cuckoo::bench {

// Stable column order:
// experiment,policy,ghosts,n,B,H,density,bins_viewed_mean,chain_len_mean,
// spawns_mean,aborts,trials,seed
std::string csv_string(const std::vector<MetricsRow>& rows);

// UTF-8, LF line endings; throws std::runtime_error naming the path on
// I/O failure.
void emit_csv(const std::vector<MetricsRow>& rows, const std::string& path);

}  // namespace cuckoo::bench
