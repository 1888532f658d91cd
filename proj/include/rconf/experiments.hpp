#pragma once
// Config-driven reproducible experiments: marginal coverage, consistency
// (symmetric-difference) curves, Hausdorff convergence curves, region vs
// central-set vs proxy comparisons, and contamination robustness. Every
// stochastic quantity is pinned by the master seed; re-running a config
// reproduces each metric bit-exactly at any thread count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rconf/distributions.hpp"
#include "rconf/grid.hpp"
#include "rconf/population.hpp"

namespace rconf {

/// A validated experiment configuration. Built from a JSON document whose
/// unknown keys are rejected; the canonical echo is kept for provenance.
struct ExperimentConfig {
  std::string experiment;  // coverage, consistency, hausdorff, proxy, contamination
  DistributionPtr distribution;
  std::vector<std::size_t> sizes;  // sample sizes n
  double alpha = 0.1;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool has_grid = false;
  GridSpec grid;
  MeasureMethod level_method = MeasureMethod::automatic;  // beta_alpha route
  std::size_t level_samples = 100000;                     // beta_alpha MC draws
  std::optional<double> beta;                             // level override (proxy, contamination)
  std::optional<std::size_t> k;                           // proxy local rank override
  std::optional<double> contamination_fraction;
  std::optional<double> contamination_magnitude;
  std::string echo;  // canonical JSON of the parsed config
};

/// Parses and validates a JSON config. Unknown keys, missing required
/// fields (seed above all), and out-of-range values raise invalid_argument
/// naming the offending field.
ExperimentConfig parse_experiment_config(const std::string& json_text);

/// One flat output row; std_error and trials are set only for stochastic
/// metrics.
struct MetricRow {
  std::size_t n = 0;
  std::string metric;
  double value = 0.0;
  std::optional<double> std_error;
  std::optional<std::size_t> trials;
};

struct ExperimentReport {
  std::string experiment;
  std::string version;
  std::string config_echo;    // canonical JSON of the config that produced it
  std::string details_json;   // experiment-specific provenance (levels, flags)
  std::vector<MetricRow> rows;
  double wall_seconds = 0.0;  // informational; excluded from determinism
};

ExperimentReport run_coverage(const ExperimentConfig& cfg);
ExperimentReport run_consistency(const ExperimentConfig& cfg);
ExperimentReport run_hausdorff(const ExperimentConfig& cfg);
ExperimentReport run_proxy_comparison(const ExperimentConfig& cfg);
ExperimentReport run_contamination(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Full report as a JSON document (config echo, rows, details, timing).
std::string report_to_json(const ExperimentReport& report);

/// Flat series "n,metric,value,std_error,trials", one row per (n, metric).
std::string report_to_csv(const ExperimentReport& report);

}  // namespace rconf
