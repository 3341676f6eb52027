#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eas/colony.hpp"

namespace eas {

struct ExperimentConfig {
  std::vector<std::string> instances;  ///< bare LA names or file paths
  int runs_per_instance = 30;
  ColonyParams params;                 ///< template; `seed` is replaced per run
  std::uint64_t base_seed = 0;
  unsigned workers = 0;                ///< 0 selects std::thread::hardware_concurrency()
};

/// Seed of run `run` (0-based): base_seed + run, fed to the stream's seeding function.
constexpr std::uint64_t run_seed(std::uint64_t base_seed, int run) noexcept {
  return base_seed + static_cast<std::uint64_t>(run);
}

struct RunOutcome {
  Time best = 0;
  std::uint64_t evaluations_to_best = 0;
  std::uint64_t evaluations_total = 0;
  double wall_ms = 0.0;
};

struct RunReport {
  std::string instance;
  int jobs = 0;
  int machines = 0;
  std::optional<Time> bks;
  Time best = 0;
  std::optional<double> relative_error_pct;  ///< absent when no BKS is known
  double mean = 0.0;
  double stddev = 0.0;                        ///< population (divide by N)
  double avg_evals_to_best = 0.0;
  double avg_evals_total = 0.0;
  double avg_wall_ms = 0.0;
  std::vector<RunOutcome> runs;
};

struct ExperimentWarning {
  std::string instance;
  std::string message;
};

struct ExperimentResult {
  std::vector<RunReport> reports;
  std::vector<ExperimentWarning> warnings;
};

double relative_error_pct(Time best, Time bks) noexcept;

/// Builds the statistics columns from per-run outcomes. `runs` must be nonempty.
RunReport summarize(std::string instance, int jobs, int machines, std::optional<Time> bks, std::vector<RunOutcome> runs);

/// Independent colony runs per instance; instances that fail to resolve become warnings.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SizeGroup {
  int jobs = 0;
  int machines = 0;
  std::size_t count = 0;
  double mean_relative_error_pct = 0.0;
};

struct SizeAggregate {
  std::vector<SizeGroup> groups;  ///< in order of first appearance
  double grand_mean_pct = 0.0;    ///< over all reports carrying a relative error
};

SizeAggregate aggregate_by_size(std::span<const RunReport> reports);

enum class ReportFormat { Table, Csv, Json };

/// "table", "csv" or "json"; throws std::invalid_argument otherwise.
ReportFormat parse_report_format(std::string_view name);

inline constexpr std::string_view kCsvHeader =
    "instance,jobs,machines,bks,best,rel_err_pct,mean,stddev,avg_evals_to_best,avg_evals_total,avg_wall_ms";

/// Byte-stable rendering. Wall-clock values are printed only when `timing` is set; otherwise
/// the column is left empty (CSV, table) or null (JSON).
std::string emit_report(std::span<const RunReport> reports, ReportFormat format, bool timing = false);

/// Expands "LA01..LA05" ranges and comma-separated lists; other tokens pass through.
std::vector<std::string> expand_instance_list(std::string_view spec);

}  // namespace eas
