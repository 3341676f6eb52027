#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eas/instance.hpp"

namespace eas {

struct OpRef {
  int job = 0;
  int step = 0;
  friend bool operator==(const OpRef&, const OpRef&) = default;
};

/// A total order over all operations of an instance, respecting each job's technological order.
struct OperationSequence {
  std::vector<OpRef> order;
  friend bool operator==(const OperationSequence&, const OperationSequence&) = default;
};

/// Throws std::invalid_argument unless `sequence` covers every operation exactly once
/// and lists each job's steps in order.
void check_sequence(const JobShopInstance& instance, const OperationSequence& sequence);

/// Start times indexed by flat operation id, plus the derived makespan and per-machine order.
struct Schedule {
  std::vector<Time> starts;
  Time makespan = 0;
  std::vector<std::vector<int>> machine_orders;  ///< op ids per machine, in processing order
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Semi-active list decoding: each operation, taken in sequence order, starts at the later of
/// its job predecessor's completion and its machine's release time.
Schedule build_schedule(const JobShopInstance& instance, const OperationSequence& sequence);

/// Schedule from explicit start times. Machine orders are derived by (start, job) order.
Schedule schedule_from_starts(const JobShopInstance& instance, std::vector<Time> starts);

enum class ViolationKind { Start, Precedence, Disjunctive, Coverage };

const char* to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::vector<OpRef> operations;
  std::string message;
};

struct ViolationReport {
  std::vector<Violation> violations;
  bool feasible() const noexcept { return violations.empty(); }
  std::size_t count(ViolationKind kind) const noexcept;
  std::string to_text() const;
};

/// Checks start >= 0, job precedence, machine disjointness and coverage, collecting all
/// violations. Machine orders are re-derived from the start times; a stored order that
/// disagrees is reported as a coverage violation.
ViolationReport validate(const JobShopInstance& instance, const Schedule& schedule);

class InfeasibleSchedule : public std::runtime_error {
 public:
  explicit InfeasibleSchedule(ViolationReport report);
  const ViolationReport& report() const noexcept { return report_; }

 private:
  ViolationReport report_;
};

/// One row per machine, one column per time unit. Operations print as their job label
/// (1-9, then A-Z, then a-z), idle time as '.'. Throws InfeasibleSchedule.
std::string render_gantt(const JobShopInstance& instance, const Schedule& schedule);

char job_label(int job) noexcept;

/// {"instance", "makespan", "operations": [{operation, job, step, machine, start, duration}]}
nlohmann::json schedule_to_json(const JobShopInstance& instance, const Schedule& schedule);
/// Reads the layout written by schedule_to_json. Records may come in any order; the
/// declared makespan must match the start times. Throws ParseError on malformed input.
Schedule schedule_from_json(const JobShopInstance& instance, const nlohmann::json& doc);

std::string format_sequence(const OperationSequence& sequence);

}  // namespace eas
