#include "cuckoo/bench/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cuckoo::bench {

std::string csv_string(const std::vector<MetricsRow>& rows) {
  std::string out =
      "experiment,policy,ghosts,n,B,H,density,bins_viewed_mean,"
      "chain_len_mean,spawns_mean,aborts,trials,seed\n";
  char line[512];
  for (const MetricsRow& r : rows) {
    std::snprintf(line, sizeof(line),
                  "%s,%s,%d,%u,%u,%u,%.6f,%.6f,%.6f,%.6f,%.6f,%u,%llu\n",
                  r.experiment.c_str(), r.policy.c_str(), r.ghosts ? 1 : 0,
                  r.n, r.B, r.H, r.density, r.bins_viewed_mean,
                  r.chain_len_mean, r.spawns_mean, r.aborts, r.trials,
                  static_cast<unsigned long long>(r.seed));
    out += line;
  }
  return out;
}

void emit_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
  if (rows.empty())
    throw std::invalid_argument("emit_csv: no rows for " + path);
  std::ofstream file(path, std::ios::binary);  // LF endings everywhere
  if (!file) throw std::runtime_error("emit_csv: cannot open " + path);
  file << csv_string(rows);
  if (!file) throw std::runtime_error("emit_csv: write failed for " + path);
}

}  // namespace cuckoo::bench
