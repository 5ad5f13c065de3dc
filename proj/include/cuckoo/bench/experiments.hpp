#pragma once

#include <string>
#include <vector>

#include "cuckoo/bench/fill.hpp"
#include "cuckoo/txn/engine.hpp"

namespace cuckoo::bench {

enum class Experiment : std::uint8_t {
  SerialFill,
  DaryFill,
  ChainLength,
  TxnAborts,
  TouchSim,
};

std::string_view experiment_name(Experiment e);

struct PolicyChoice {
  Policy policy = Policy::RandomKick;
  bool ghosts = false;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::SerialFill;
  std::uint32_t num_bins = 1u << 10;
  std::uint32_t bin_size = 4;
  std::uint32_t num_hashes = 2;  // d for single-slot tables
  std::vector<PolicyChoice> policies;
  std::uint32_t trials = 50;
  std::vector<double> densities;  // strictly increasing, max <= 0.99
  std::uint64_t seed = 1;

  // transactional experiments
  std::uint32_t threads = 8;
  std::uint32_t ops_per_txn = 100;
  txn::WorkloadSpec ratios;  // only the ratio fields are used
  std::vector<int> presets;

  // touch simulation
  std::uint32_t touch_threads = 15;  // t
  std::uint32_t touch_ops = 2;       // j, slots touched per operation
  std::uint32_t touch_rounds = 1000; // D, rounds per trial

  FillOptions fill;
};

void validate_experiment(const ExperimentConfig& cfg);

// One CSV row per (policy, density). Metric means are over completed
// insertions of completed trials; failures surface in diagnostics.
struct MetricsRow {
  std::string experiment;
  std::string policy;
  bool ghosts = false;
  std::uint32_t n = 0;
  std::uint32_t B = 0;
  std::uint32_t H = 0;
  double density = 0;
  double bins_viewed_mean = 0;
  double chain_len_mean = 0;
  double spawns_mean = 0;
  double aborts = 0;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
};

std::vector<MetricsRow> run_serial_fill(const ExperimentConfig& cfg);
std::vector<MetricsRow> run_dary_fill(const ExperimentConfig& cfg);
std::vector<MetricsRow> run_chain_length(const ExperimentConfig& cfg);
std::vector<MetricsRow> run_txn_aborts(const ExperimentConfig& cfg);

struct TouchSimResult {
  double trial_frequency = 0;  // fraction of trials with any oversubscription
  double round_frequency = 0;  // fraction of rounds with any oversubscription
  double analytic_bound = 0;   // D * t * j * (t*j/n)^B, capped at 1
  std::uint64_t rounds = 0;
};
TouchSimResult touch_simulation(std::uint32_t t, std::uint32_t j,
                                std::uint32_t rounds_per_trial,
                                std::uint32_t trials, std::uint32_t n,
                                std::uint32_t B, std::uint64_t seed);
std::vector<MetricsRow> run_touch_sim(const ExperimentConfig& cfg);

std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg);

// Per-band metric accumulation (0.5% density bands).
class BandAccumulator {
 public:
  static constexpr double kBandWidth = 0.005;
  void record(double density_before, const OpMetrics& m);
  void merge(const BandAccumulator& other);
  // Mean metrics for the band ending at the grid density (the band that
  // covers [density - 0.5%, density)).
  bool band_means(double grid_density, double* views, double* chain,
                  double* spawns) const;
  static std::size_t band_for_grid(double grid_density);

 private:
  struct Band {
    double views = 0, chain = 0, spawns = 0;
    std::uint64_t count = 0;
  };
  std::vector<Band> bands_;
};

}  // namespace cuckoo::bench
