#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "series.hpp"
#include "signals.hpp"

namespace riso {

/// Which signal the generator produces for each replication.  ell_random
/// redraws the tail exponent uniformly from [1, ceil(log2 n)] per
/// replication (the hard two-piece mixture); otherwise ell is fixed.
struct SignalSpec {
  enum class Family { Staircase, LowerBound };
  Family family = Family::Staircase;
  std::size_t k = 1;        // staircase block count
  double delta = 1.0;       // staircase step height
  double alpha = 1.0;       // lower-bound amplitude factor
  std::optional<std::size_t> ell;  // lower-bound exponent; unset means random
};

struct EstimatorSpec {
  enum class Method {
    Isotonic,
    Antitonic,
    Reduced,         // fixed budget
    Auto,            // penalized reduced, plain penalty
    AutoModified,    // penalized reduced, modified penalty at k = n
    Segment,         // fixed budget, unconstrained levels
    SegmentAuto,
    Unimodal,        // aggregation with fixed budget
  };
  Method method = Method::Isotonic;
  std::optional<std::size_t> k;  // unset when k_true
  bool k_true = false;           // use the generating signal's piece count
  std::optional<double> tau;
  std::optional<double> sigma;   // unset: estimated where needed
  double c_tau = 6.0;
  std::optional<std::size_t> k_max;  // segment-auto search bound
  std::string label;             // CSV name; derived from method when empty
};

struct ExperimentConfig {
  std::string id;
  SignalSpec signal;
  NoiseSpec noise;
  double sigma = 1.0;                  // noise scale
  std::vector<std::size_t> n_grid;
  std::vector<EstimatorSpec> estimators;
  std::vector<double> p_list;          // loss exponents
  std::size_t replications = 200;
  std::uint64_t seed = 1;
};

struct RiskRow {
  std::string experiment;
  std::size_t n = 0;
  std::size_t true_k = 0;
  std::string signal;
  std::string noise;
  std::string estimator;
  double p = 2.0;
  std::size_t replications = 0;
  double mean_loss = 0.0;
  double std_error = 0.0;
  double mean_k_hat = 0.0;
  double mean_runtime = 0.0;  // seconds, wall clock
};

using RiskTable = std::vector<RiskRow>;

/// sum_i |a_i - b_i|^p (the p-th power, not its root).
double lp_loss(const std::vector<double>& a, const std::vector<double>& b, double p);

/// Monte Carlo risk estimation.  Each (n, replication) derives its own
/// stream from the master seed, draws the signal randomness and then the
/// noise, and hands the same data vector to every estimator, so results are
/// identical for any thread count.  threads <= 1 disables parallelism.
RiskTable run_experiment(const ExperimentConfig& config, int threads = 1);

/// CSV with a fixed header; RFC 4180 quoting; floats printed with the
/// shortest round-trip representation.
void write_table(const RiskTable& table, const std::string& path);
std::string format_table(const RiskTable& table);
RiskTable parse_table(const std::string& csv);

/// Parse and validate a JSON experiment file; errors carry the field path.
std::vector<ExperimentConfig> load_config(const std::string& path);
std::vector<ExperimentConfig> parse_config(const std::string& text);

/// Run every experiment in the config and concatenate the tables.
RiskTable run_config(const std::vector<ExperimentConfig>& configs, int threads);

}  // namespace riso
