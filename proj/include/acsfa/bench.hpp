// Seeded experiment runs of ACS and ACSFA across instances, aggregation,
// and delimiter-separated export.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acsfa/acs.hpp"
#include "acsfa/hybrid.hpp"
#include "acsfa/stats.hpp"

namespace acsfa::bench {

enum class Algorithm { Acs, Acsfa };

std::string_view to_string(Algorithm algo);
/// Accepts "acs" / "acsfa" in any case.
Algorithm parse_algorithm(std::string_view name);

/// Raised by config loading; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::vector<std::filesystem::path> instances;
  std::vector<Algorithm> algorithms{Algorithm::Acs, Algorithm::Acsfa};
  std::size_t repetitions = 10;
  std::size_t iterations = 1000;
  std::size_t ants = 10;
  /// Either one seed per repetition, or base_seed + repetition index.
  std::vector<std::uint64_t> seeds;
  std::uint64_t base_seed = 1;
  /// ACSFA tuning ranges and fixed values.
  hybrid::AcsfaConfig acsfa;
  /// Fixed parameters of the ACS baseline.
  acs::AcsParams acs;
  std::filesystem::path output_dir = "results";
  /// Optional `name,optimum` file; enables the error response matrix.
  std::optional<std::filesystem::path> optima;
  std::size_t threads = 0;  // 0: hardware concurrency

  std::uint64_t seed_for(std::size_t repetition) const;
  /// Throws ConfigError on the first invalid field.
  void validate() const;
};

/// Flat `key = value` text, `#` comments. Relative paths are resolved
/// against `base_dir`. Unspecified fields keep their defaults.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunResult {
  Algorithm algorithm = Algorithm::Acs;
  std::string instance;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  tsplib::Length best = 0;
  std::vector<tsplib::City> tour;
  std::int64_t microseconds = 0;  // solver wall time only
  std::optional<firefly::ParamVector> best_params;
  hybrid::ParameterTrace trace;  // ACSFA only
  std::vector<tsplib::Length> best_trace;
};

struct SummaryRow {
  Algorithm algorithm = Algorithm::Acs;
  std::string instance;
  tsplib::Length best = 0;
  double average = 0.0;
  tsplib::Length worst = 0;
  double t_avg_seconds = 0.0;
};

struct ExperimentResult {
  std::vector<SummaryRow> summary;
  std::vector<RunResult> runs;
  /// Instances that failed to load, with the reason.
  std::vector<std::string> failures;
};

/// Runs a single seeded solve. Exposed for the CLI and for replaying a
/// persisted run.
RunResult run_once(const tsplib::TspInstance& inst, Algorithm algo, const ExperimentConfig& config,
                   std::size_t repetition, std::uint64_t seed);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Aggregates runs grouped by (algorithm, instance) in order of first
/// appearance.
std::vector<SummaryRow> summarize(const std::vector<RunResult>& runs);

/// Response matrix of best lengths: algorithms as treatments, instances as
/// blocks.
stats::ResponseMatrix best_matrix(const std::vector<SummaryRow>& summary);

void write_summary(std::ostream& out, const std::vector<SummaryRow>& summary);
void write_runs(std::ostream& out, const std::vector<RunResult>& runs);
/// Reads back the per-run file written by write_runs (traces excluded).
std::vector<RunResult> read_runs(std::istream& in);
void write_trace(std::ostream& out, const hybrid::ParameterTrace& trace,
                 const std::vector<tsplib::Length>& best_trace);

/// Writes summary.csv, runs.csv, best_matrix.csv, traces/*.csv and, when
/// optima are configured, error_matrix.csv under `dir`.
void export_results(const ExperimentResult& result, const std::filesystem::path& dir,
                    const std::optional<std::filesystem::path>& optima = std::nullopt);

}  // namespace acsfa::bench
