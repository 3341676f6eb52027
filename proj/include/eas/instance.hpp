#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace eas {

/// Integral time unit. All durations, start times and makespans use it.
using Time = std::int64_t;

using IndexMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using TimeMatrix = Eigen::Matrix<Time, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Operation {
  int job = 0;
  int step = 0;
  int machine = 0;
  Time duration = 1;
};

/// Raised by the instance parser. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A job-shop instance: `jobs` rows, each an ordered list of `machines` operations
/// visiting every machine exactly once. Immutable after construction.
///
/// Operations are addressed either by (job, step) or by the flat id `job * machines + step`.
class JobShopInstance {
 public:
  /// Validates the matrices; throws std::invalid_argument on any invariant violation.
  JobShopInstance(std::string name, IndexMatrix machine_of, TimeMatrix duration_of);

  const std::string& name() const noexcept { return name_; }
  int jobs() const noexcept { return static_cast<int>(machine_of_.rows()); }
  int machines() const noexcept { return static_cast<int>(machine_of_.cols()); }
  int operation_count() const noexcept { return jobs() * machines(); }

  int machine(int job, int step) const { return machine_of_(job, step); }
  Time duration(int job, int step) const { return duration_of_(job, step); }
  Operation operation(int job, int step) const {
    return {job, step, machine(job, step), duration(job, step)};
  }

  int op_id(int job, int step) const noexcept { return job * machines() + step; }
  int job_of(int op_id) const noexcept { return op_id / machines(); }
  int step_of(int op_id) const noexcept { return op_id % machines(); }

  const IndexMatrix& machine_matrix() const noexcept { return machine_of_; }
  const TimeMatrix& duration_matrix() const noexcept { return duration_of_; }

  Time job_length(int job) const { return duration_of_.row(job).sum(); }
  Time machine_load(int machine) const;
  /// max(max machine load, max job length); no feasible schedule is shorter.
  Time trivial_lower_bound() const;

  friend bool operator==(const JobShopInstance& a, const JobShopInstance& b) {
    return a.name_ == b.name_ && a.machine_of_ == b.machine_of_ && a.duration_of_ == b.duration_of_;
  }

 private:
  std::string name_;
  IndexMatrix machine_of_;
  TimeMatrix duration_of_;
};

/// Parses the OR-Library job-shop text layout: optional comment lines (starting with '#')
/// and blank lines, a header "n m", then n rows of m "machine duration" pairs with
/// 0-based machine indices.
JobShopInstance parse_instance(std::string_view source, std::string name);

/// Inverse of parse_instance (header comment carries the name).
std::string serialize_instance(const JobShopInstance& instance);

JobShopInstance load_instance_file(const std::filesystem::path& path);

/// Directory searched for bare instance names. `EAS_JSSP_DATA_DIR` overrides the built-in default.
std::filesystem::path fixture_directory();

/// Accepts an existing file path, or a bare name such as "LA05" resolved as `<fixtures>/la05.txt`.
/// The instance name is the upper-cased file stem.
JobShopInstance resolve_instance(const std::string& path_or_name);

/// log10 of the (n!)^m disjunctive orientation count.
double search_space_log10(const JobShopInstance& instance);

struct BksRecord {
  std::string_view name;
  int jobs;
  int machines;
  Time bks;
};

/// Best-known makespans of the 40 Lawrence instances.
std::span<const BksRecord> bks_table() noexcept;

/// Case-insensitive lookup; throws LookupError for names outside LA01..LA40.
Time lookup_bks(std::string_view name);
std::optional<Time> find_bks(std::string_view name) noexcept;

}  // namespace eas
