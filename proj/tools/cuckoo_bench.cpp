// Benchmark harness: density sweeps for bins viewed per insertion and
// kick-out chain length, transaction-abort sweeps for the six engine
// presets, and the concurrent-touch Monte Carlo. Emits CSV.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cuckoo/bench/csv.hpp"
#include "cuckoo/bench/experiments.hpp"

using namespace cuckoo;
using namespace cuckoo::bench;

namespace {

std::vector<double> parse_densities(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

struct CommonArgs {
  std::uint32_t bins = 1u << 10;
  std::uint32_t bin_size = 4;
  std::uint32_t hashes = 2;
  std::vector<std::string> policies;
  bool ghosts = false;
  std::uint32_t trials = 50;
  std::string densities = "0.5,0.6,0.7,0.8,0.9,0.95,0.975";
  std::uint64_t seed = 1;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--bins", args.bins, "number of bins (n)");
  cmd->add_option("--bin-size", args.bin_size, "slots per bin (B)");
  cmd->add_option("--hashes", args.hashes, "hash functions per key (H or d)");
  cmd->add_option("--policy", args.policies,
                  "eviction policy, repeatable: random|queue|bfs|sorted|"
                  "hybrid|rattle|khosla");
  cmd->add_flag("--ghosts", args.ghosts, "enable ghost insertions");
  cmd->add_option("--trials", args.trials, "independent tables per policy");
  cmd->add_option("--densities", args.densities,
                  "comma-separated density grid");
  cmd->add_option("--seed", args.seed, "base RNG seed");
  cmd->add_option("--out", args.out_path, "output CSV path");
}

ExperimentConfig to_config(const CommonArgs& args, Experiment exp) {
  ExperimentConfig cfg;
  cfg.experiment = exp;
  cfg.num_bins = args.bins;
  cfg.bin_size = args.bin_size;
  cfg.num_hashes = args.hashes;
  cfg.trials = args.trials;
  cfg.densities = parse_densities(args.densities);
  cfg.seed = args.seed;
  for (const std::string& name : args.policies) {
    auto p = policy_from_name(name);
    if (!p) throw CLI::ValidationError("unknown policy: " + name);
    cfg.policies.push_back({*p, args.ghosts});
  }
  return cfg;
}

void write_rows(const std::vector<MetricsRow>& rows,
                const std::string& path) {
  if (path.empty()) {
    std::fputs(csv_string(rows).c_str(), stdout);
  } else {
    emit_csv(rows, path);
    std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(),
                 path.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cuckoo kick-out eviction benchmarks"};
  app.require_subcommand(1);

  CommonArgs serial_args;
  CLI::App* serial = app.add_subcommand(
      "serial-fill", "bins viewed per insertion, walk and search policies");
  add_common(serial, serial_args);

  CommonArgs dary_args;
  dary_args.bin_size = 1;
  dary_args.hashes = 4;
  CLI::App* dary = app.add_subcommand(
      "dary-fill", "single-slot tables with d hash functions");
  add_common(dary, dary_args);

  CommonArgs chain_args;
  CLI::App* chain = app.add_subcommand(
      "chain-length", "kick-out chain lengths for search policies");
  add_common(chain, chain_args);

  CommonArgs txn_args;
  txn_args.bins = 1u << 11;
  txn_args.bin_size = 8;
  CLI::App* txn_cmd = app.add_subcommand(
      "txn-aborts", "transaction aborts per density, six engine presets");
  add_common(txn_cmd, txn_args);
  std::uint32_t threads = 8;
  std::uint32_t ops_per_txn = 100;
  std::string ratios = "1:0:1:1";
  std::vector<int> presets;
  txn_cmd->add_option("--threads", threads, "worker threads");
  txn_cmd->add_option("--ops-per-txn", ops_per_txn,
                      "operations batched per transaction");
  txn_cmd->add_option("--ratios", ratios,
                      "insert:delete:overwrite:read frequencies");
  txn_cmd->add_option("--preset", presets,
                      "engine preset 1..6, repeatable (default: all six)");

  CommonArgs touch_args;
  touch_args.bins = 1u << 14;
  touch_args.bin_size = 8;
  touch_args.trials = 100;
  CLI::App* touch = app.add_subcommand(
      "touch-sim", "Monte Carlo of simultaneous bin touches vs the bound");
  add_common(touch, touch_args);
  std::uint32_t touch_threads = 15;
  std::uint32_t touch_j = 2;
  std::uint32_t touch_rounds = 1000;
  touch->add_option("--threads", touch_threads, "simulated threads (t)");
  touch->add_option("--touch-j", touch_j, "slots touched per operation (j)");
  touch->add_option("--rounds", touch_rounds, "operations per trial (D)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (serial->parsed()) {
      if (serial_args.policies.empty())
        serial_args.policies = {"random", "queue", "bfs", "sorted", "hybrid"};
      write_rows(run_serial_fill(to_config(serial_args,
                                           Experiment::SerialFill)),
                 serial_args.out_path);
    } else if (dary->parsed()) {
      if (dary_args.policies.empty())
        dary_args.policies = {"random", "rattle", "khosla", "bfs", "sorted"};
      ExperimentConfig cfg = to_config(dary_args, Experiment::DaryFill);
      cfg.fill.walk.max_steps = 5000;  // d-ary walks near threshold
      write_rows(run_dary_fill(cfg), dary_args.out_path);
    } else if (chain->parsed()) {
      ExperimentConfig cfg = to_config(chain_args, Experiment::ChainLength);
      if (cfg.policies.empty()) {
        cfg.policies = {{Policy::Bfs, false},
                        {Policy::Bfs, true},
                        {Policy::SortedSearch, false},
                        {Policy::SortedSearch, true}};
      }
      write_rows(run_chain_length(cfg), chain_args.out_path);
    } else if (txn_cmd->parsed()) {
      ExperimentConfig cfg = to_config(txn_args, Experiment::TxnAborts);
      cfg.threads = threads;
      cfg.ops_per_txn = ops_per_txn;
      unsigned ri, rd, ro, rr;
      if (std::sscanf(ratios.c_str(), "%u:%u:%u:%u", &ri, &rd, &ro, &rr) != 4)
        throw CLI::ValidationError("--ratios expects i:d:o:r");
      cfg.ratios.ratio_insert = ri;
      cfg.ratios.ratio_delete = rd;
      cfg.ratios.ratio_overwrite = ro;
      cfg.ratios.ratio_read = rr;
      cfg.presets = presets.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6}
                                    : presets;
      write_rows(run_txn_aborts(cfg), txn_args.out_path);
    } else if (touch->parsed()) {
      ExperimentConfig cfg = to_config(touch_args, Experiment::TouchSim);
      cfg.touch_threads = touch_threads;
      cfg.touch_ops = touch_j;
      cfg.touch_rounds = touch_rounds;
      auto rows = run_touch_sim(cfg);
      write_rows(rows, touch_args.out_path);
      std::fprintf(stderr,
                   "observed trial frequency %.6f, per-round %.6f, "
                   "analytic bound %.6f\n",
                   rows[0].bins_viewed_mean, rows[0].spawns_mean,
                   rows[0].chain_len_mean);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
