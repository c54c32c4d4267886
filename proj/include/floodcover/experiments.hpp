#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "floodcover/coverage.hpp"

namespace floodcover {

/// Parses the key = value config format:
///
///   [coverage]  n k dt t_end quadrature_res seed convergence_tol
///   [density]   mode phi0
///   [sensing]   scenario tau mask_width footprint spiral_a spiral_omega
///               growth_amplitude growth_period
///   [metrics]   eval_res
///
/// Every key is optional. Unknown sections or keys and malformed values
/// throw std::invalid_argument. The result is not validated, so callers can
/// apply overrides first.
SimConfig parse_config(std::istream &in);
SimConfig load_config(const std::filesystem::path &path);

/// $FLOODCOVER_OUT when set, otherwise "out".
std::filesystem::path default_output_root();

/// Times at which density and mask snapshots are written: 0, t_end / 2, t_end.
std::vector<double> snapshot_times(const SimConfig &config);

/// density_t<time>.pgm plus mask_t<time>_a<agent>.pgm for every agent.
void render_snapshots(const RunRecord &record, const std::filesystem::path &dir,
                      std::span<const double> times);

/// Final coverage and the first time coverage reaches 90% of it.
struct RunOutcome {
  DensityMode mode = DensityMode::full;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double final_coverage = 0.0;
  double t90 = 0.0;
};

RunOutcome outcome_of(DensityMode mode, std::size_t n, std::uint64_t seed,
                      std::span<const StepMetrics> metrics);

/// Simulates `config` and writes metrics.csv, run.jsonl and the snapshots
/// into `dir` (created if needed).
RunOutcome run_to_directory(const SimConfig &config, const std::filesystem::path &dir);

struct BatchSpec {
  std::vector<std::size_t> fleet_sizes{16, 20, 24};
  std::size_t trials = 10;
  std::vector<DensityMode> modes{DensityMode::full, DensityMode::axis_aligned};
  SimConfig base;
  std::uint64_t base_seed = 0;
  std::filesystem::path out_dir;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned jobs = 0;

  void validate() const;
};

struct SummaryRow {
  DensityMode mode = DensityMode::full;
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_cov = 0.0;
  double std_cov = 0.0;
  double min_cov = 0.0;
  double max_cov = 0.0;
  double mean_t90 = 0.0;
};

using Summary = std::vector<SummaryRow>;

/// Groups by (mode, n); modes in gmdf, axis order and n ascending. std_cov
/// is the sample standard deviation (0 for a single trial).
Summary summarize(std::span<const RunOutcome> outcomes);

struct BatchResult {
  std::vector<RunOutcome> runs;
  Summary summary;
};

/// Runs every (mode, fleet size, trial) with seed base_seed + trial into
/// out_dir/run_<mode>_n<n>_t<trial>/ and writes out_dir/summary.csv. The
/// output directory is checked for writability before any simulation.
BatchResult run_batch(const BatchSpec &spec);

/// Rebuilds outcomes from run directories on disk (run.jsonl header and
/// metrics.csv). Throws std::invalid_argument for a missing directory.
std::vector<RunOutcome> load_outcomes(std::span<const std::filesystem::path> run_dirs);

/// Header mode,n,trials,mean_cov,std_cov,min_cov,max_cov,mean_t90.
void write_summary_csv(const Summary &summary, std::ostream &out);

} // namespace floodcover
