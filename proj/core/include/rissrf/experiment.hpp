// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rissrf/config.hpp"
#include "rissrf/geometry.hpp"
#include "rissrf/metrics.hpp"

namespace rissrf {

struct SolverStats {
  int solves = 0;
  double iterations_mean = 0.0;
  double converged_fraction = 0.0;
  long negative_gain_events = 0;
  long trace_length = 0;  // objective evaluations summed over the block
};

/// Metrics of one scheme on one channel realization.
struct TrialResult {
  Scheme scheme = Scheme::SingleRf;
  int users = 0;
  int elements = 0;
  std::string bits;  // codebook label: "1", "2", "4", "inf"
  int trial_index = 0;
  std::uint64_t trial_seed = 0;

  double distortion = 0.0;
  double p_out = 0.0;
  double papr = 1.0;
  double received_mse = 0.0;  // mean per interval, with the configured noise variance
  SolverStats solver;

  bool ok = true;
  std::string error;

  Decibel distortion_db() const { return to_db(distortion); }
  Decibel papr_db() const { return to_db(papr); }
};

/// Independent streams for the three random inputs of a trial.
struct TrialSeeds {
  std::uint64_t users = 0;
  std::uint64_t fading = 0;
  std::uint64_t symbols = 0;

  static TrialSeeds from_trial_seed(std::uint64_t trial_seed);
};

/// Seed of trial `trial_index` at sweep point (K, M, codebook); a pure function of its inputs.
std::uint64_t trial_seed(std::uint64_t master_seed, int users, int elements, const PhaseCodebook& codebook,
                         int trial_index);

/// Thread-safe cache of surface models keyed by element count.
class SurfaceCache {
 public:
  explicit SurfaceCache(const SimConfig& config);

  std::shared_ptr<const SurfaceModel> get(int elements);
  /// Builds the surface for M from the configuration without caching.
  static SurfaceModel build(const SimConfig& config, int elements);

 private:
  SimConfig config_;
  std::mutex mutex_;
  std::map<int, std::shared_ptr<const SurfaceModel>> surfaces_;
};

/// Error raised by a trial, carrying the sweep coordinates in its message.
class TrialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrialOutcome {
  TrialResult single_rf;
  std::optional<TrialResult> baseline;
  /// Full trial record (config keys, users, surface, per-solve diagnostics) when requested.
  std::optional<nlohmann::json> record;
};

/// Runs one channel realization: users, fading and symbols from the derived
/// streams, the tuner on all N intervals, metrics, and the power-matched MF
/// baseline when the config lists it. Throws TrialError with context.
TrialOutcome run_trial(const SimConfig& config, int users, int elements, const PhaseCodebook& codebook,
                       int trial_index, SurfaceCache& surfaces, bool with_record = false);

/// As run_trial with explicit streams; `trial_index` and `trial_seed` are only labels.
TrialOutcome run_trial_with_seeds(const SimConfig& config, int users, int elements, const PhaseCodebook& codebook,
                                  const TrialSeeds& seeds, SurfaceCache& surfaces, bool with_record = false,
                                  int trial_index = 0, std::uint64_t trial_seed_label = 0);

struct SweepPoint {
  int users = 0;
  int elements = 0;
  PhaseCodebook codebook = PhaseCodebook::continuous();
};

/// Cartesian (M, B, K) grid in output order.
std::vector<SweepPoint> sweep_points(const SimConfig& config);

struct PointSummary {
  Scheme scheme = Scheme::SingleRf;
  int users = 0;
  int elements = 0;
  std::string bits;
  int trials = 0;
  int failed = 0;
  double d_db_mean = 0.0;
  double d_db_std = 0.0;
  double d_linear_mean = 0.0;
  double p_out_mean = 0.0;
  double papr_db_mean = 0.0;
  double papr_db_std = 0.0;
  double papr_linear_mean = 0.0;
  double iterations_mean = 0.0;
  double converged_fraction = 0.0;
};

/// Aggregates successful trials (dB-domain and linear means).
PointSummary summarize(Scheme scheme, const SweepPoint& point, const std::vector<TrialResult>& trials);

struct Dataset {
  SimConfig config;
  std::vector<TrialResult> trials;  // ordered by (point, scheme, trial index)
  std::vector<PointSummary> summary;
  double seconds = 0.0;

  const PointSummary* find(Scheme scheme, int users, int elements, const std::string& bits) const;
};

struct SweepOptions {
  /// Worker threads; 0 picks the hardware concurrency.
  int workers = 0;
  /// Writes trials.csv, summary.csv and manifest.json here when set.
  std::optional<std::filesystem::path> output_dir;
  /// Reuses rows from a previous interrupted run in output_dir.
  bool resume = false;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Runs every configured point. Results depend only on the config, never on
/// worker count or completion order.
Dataset run_sweep(const SimConfig& config, const SweepOptions& options = {});

}  // namespace rissrf
