#include "eas/schedule.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace eas {

namespace {

constexpr Time kUnscheduled = std::numeric_limits<Time>::min();

std::string op_label(const OpRef& op) { return fmt::format("(J{},s{})", op.job + 1, op.step + 1); }

}  // namespace

void check_sequence(const JobShopInstance& instance, const OperationSequence& sequence) {
  const auto expected = static_cast<std::size_t>(instance.operation_count());
  if (sequence.order.size() != expected) {
    throw std::invalid_argument(
        fmt::format("sequence holds {} operations, instance has {}", sequence.order.size(), expected));
  }
  std::vector<int> next_step(instance.jobs(), 0);
  for (std::size_t i = 0; i < sequence.order.size(); ++i) {
    const auto& op = sequence.order[i];
    if (op.job < 0 || op.job >= instance.jobs()) {
      throw std::invalid_argument(fmt::format("position {}: job {} out of range", i, op.job));
    }
    if (op.step != next_step[op.job]) {
      throw std::invalid_argument(fmt::format("position {}: {} breaks the technological order of job {} (expected step {})",
                                              i, op_label(op), op.job + 1, next_step[op.job] + 1));
    }
    ++next_step[op.job];
  }
}

Schedule build_schedule(const JobShopInstance& instance, const OperationSequence& sequence) {
  check_sequence(instance, sequence);
  Schedule schedule;
  schedule.starts.assign(instance.operation_count(), 0);
  schedule.machine_orders.resize(instance.machines());
  std::vector<Time> job_ready(instance.jobs(), 0);
  std::vector<Time> machine_ready(instance.machines(), 0);
  for (const auto& [job, step] : sequence.order) {
    const int machine = instance.machine(job, step);
    const Time start = std::max(job_ready[job], machine_ready[machine]);
    const Time end = start + instance.duration(job, step);
    const int id = instance.op_id(job, step);
    schedule.starts[id] = start;
    schedule.machine_orders[machine].push_back(id);
    job_ready[job] = end;
    machine_ready[machine] = end;
    schedule.makespan = std::max(schedule.makespan, end);
  }
  return schedule;
}

namespace {

std::vector<std::vector<int>> derive_machine_orders(const JobShopInstance& instance, const std::vector<Time>& starts) {
  std::vector<std::vector<int>> orders(instance.machines());
  for (int id = 0; id < instance.operation_count(); ++id) {
    if (starts[id] == kUnscheduled) continue;
    orders[instance.machine(instance.job_of(id), instance.step_of(id))].push_back(id);
  }
  for (auto& order : orders) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return starts[a] < starts[b]; });
  }
  return orders;
}

}  // namespace

Schedule schedule_from_starts(const JobShopInstance& instance, std::vector<Time> starts) {
  if (starts.size() != static_cast<std::size_t>(instance.operation_count())) {
    throw std::invalid_argument("start vector length differs from the operation count");
  }
  Schedule schedule;
  schedule.machine_orders = derive_machine_orders(instance, starts);
  for (int id = 0; id < instance.operation_count(); ++id) {
    if (starts[id] == kUnscheduled) continue;
    schedule.makespan = std::max(schedule.makespan, starts[id] + instance.duration(instance.job_of(id), instance.step_of(id)));
  }
  schedule.starts = std::move(starts);
  return schedule;
}

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::Start: return "start";
    case ViolationKind::Precedence: return "precedence";
    case ViolationKind::Disjunctive: return "disjunctive";
    case ViolationKind::Coverage: return "coverage";
  }
  return "unknown";
}

std::size_t ViolationReport::count(ViolationKind kind) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

std::string ViolationReport::to_text() const {
  if (violations.empty()) return "feasible: no violations\n";
  std::string out = fmt::format("infeasible: {} violation(s)\n", violations.size());
  for (const auto& v : violations) out += fmt::format("  [{}] {}\n", to_string(v.kind), v.message);
  return out;
}

ViolationReport validate(const JobShopInstance& instance, const Schedule& schedule) {
  ViolationReport report;
  auto add = [&](ViolationKind kind, std::vector<OpRef> ops, std::string message) {
    report.violations.push_back({kind, std::move(ops), std::move(message)});
  };

  const int n = instance.jobs();
  const int m = instance.machines();
  if (schedule.starts.size() != static_cast<std::size_t>(instance.operation_count())) {
    add(ViolationKind::Coverage, {},
        fmt::format("schedule holds {} start times, instance has {} operations", schedule.starts.size(),
                    instance.operation_count()));
    return report;
  }
  const auto& starts = schedule.starts;
  auto scheduled = [&](int j, int s) { return starts[instance.op_id(j, s)] != kUnscheduled; };
  auto start = [&](int j, int s) { return starts[instance.op_id(j, s)]; };

  for (int j = 0; j < n; ++j) {
    for (int s = 0; s < m; ++s) {
      if (!scheduled(j, s)) {
        add(ViolationKind::Coverage, {{j, s}}, fmt::format("{} is not scheduled", op_label({j, s})));
      } else if (start(j, s) < 0) {
        add(ViolationKind::Start, {{j, s}}, fmt::format("{} starts at {} < 0", op_label({j, s}), start(j, s)));
      }
    }
  }

  for (int j = 0; j < n; ++j) {
    for (int s = 1; s < m; ++s) {
      if (!scheduled(j, s) || !scheduled(j, s - 1)) continue;
      const Time gap = start(j, s) - start(j, s - 1);
      if (gap < instance.duration(j, s - 1)) {
        add(ViolationKind::Precedence, {{j, s - 1}, {j, s}},
            fmt::format("{}->{}: successor starts at {}, predecessor completes at {}", op_label({j, s - 1}),
                        op_label({j, s}), start(j, s), start(j, s - 1) + instance.duration(j, s - 1)));
      }
    }
  }

  const auto derived = derive_machine_orders(instance, starts);
  for (int k = 0; k < m; ++k) {
    const auto& order = derived[k];
    for (std::size_t a = 0; a < order.size(); ++a) {
      const int ja = instance.job_of(order[a]), sa = instance.step_of(order[a]);
      const Time end_a = starts[order[a]] + instance.duration(ja, sa);
      for (std::size_t b = a + 1; b < order.size() && starts[order[b]] < end_a; ++b) {
        const int jb = instance.job_of(order[b]), sb = instance.step_of(order[b]);
        add(ViolationKind::Disjunctive, {{ja, sa}, {jb, sb}},
            fmt::format("machine {}: {} [{}, {}) overlaps {} [{}, {})", k, op_label({ja, sa}), starts[order[a]], end_a,
                        op_label({jb, sb}), starts[order[b]], starts[order[b]] + instance.duration(jb, sb)));
      }
    }
  }

  if (schedule.machine_orders.size() != static_cast<std::size_t>(m)) {
    add(ViolationKind::Coverage, {}, fmt::format("schedule lists {} machine orders, instance has {} machines",
                                                 schedule.machine_orders.size(), m));
  } else {
    for (int k = 0; k < m; ++k) {
      if (schedule.machine_orders[k] != derived[k]) {
        add(ViolationKind::Coverage, {},
            fmt::format("machine {}: stored processing order disagrees with the order implied by start times", k));
      }
    }
  }
  return report;
}

InfeasibleSchedule::InfeasibleSchedule(ViolationReport report)
    : std::runtime_error("schedule is infeasible:\n" + report.to_text()), report_(std::move(report)) {}

char job_label(int job) noexcept {
  static constexpr std::string_view kLabels =
      "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
  return job >= 0 && static_cast<std::size_t>(job) < kLabels.size() ? kLabels[job] : '#';
}

std::string render_gantt(const JobShopInstance& instance, const Schedule& schedule) {
  auto report = validate(instance, schedule);
  if (!report.feasible()) throw InfeasibleSchedule(std::move(report));

  const int m = instance.machines();
  const auto gutter = fmt::format("M{}", m - 1).size() + 1;
  std::string out;
  for (int k = 0; k < m; ++k) {
    std::string row(static_cast<std::size_t>(schedule.makespan), '.');
    for (int id : schedule.machine_orders[k]) {
      const int job = instance.job_of(id);
      const auto begin = static_cast<std::size_t>(schedule.starts[id]);
      const auto len = static_cast<std::size_t>(instance.duration(job, instance.step_of(id)));
      row.replace(begin, len, len, job_label(job));
    }
    out += fmt::format("{:<{}}|{}\n", fmt::format("M{}", k), gutter, row);
  }
  return out;
}

nlohmann::json schedule_to_json(const JobShopInstance& instance, const Schedule& schedule) {
  nlohmann::json ops = nlohmann::json::array();
  for (int k = 0; k < instance.machines(); ++k) {
    for (int id : schedule.machine_orders[k]) {
      const int j = instance.job_of(id), s = instance.step_of(id);
      ops.push_back({{"operation", id}, {"job", j}, {"step", s}, {"machine", k},
                     {"start", schedule.starts[id]}, {"duration", instance.duration(j, s)}});
    }
  }
  std::stable_sort(ops.begin(), ops.end(), [](const nlohmann::json& a, const nlohmann::json& b) {
    return a["operation"].get<int>() < b["operation"].get<int>();
  });
  return {{"instance", instance.name()}, {"makespan", schedule.makespan}, {"operations", std::move(ops)}};
}

Schedule schedule_from_json(const JobShopInstance& instance, const nlohmann::json& doc) {
  try {
    std::vector<Time> starts(instance.operation_count(), kUnscheduled);
    for (const auto& rec : doc.at("operations")) {
      const int j = rec.at("job").get<int>();
      const int s = rec.at("step").get<int>();
      if (j < 0 || j >= instance.jobs() || s < 0 || s >= instance.machines()) {
        throw ParseError(0, fmt::format("schedule record names unknown operation (job {}, step {})", j, s));
      }
      const int id = instance.op_id(j, s);
      if (rec.contains("operation") && rec["operation"].get<int>() != id) {
        throw ParseError(0, fmt::format("record {}: operation id {} does not match job/step", op_label({j, s}),
                                        rec["operation"].get<int>()));
      }
      if (rec.contains("machine") && rec["machine"].get<int>() != instance.machine(j, s)) {
        throw ParseError(0, fmt::format("record {}: machine disagrees with the instance", op_label({j, s})));
      }
      if (rec.contains("duration") && rec["duration"].get<Time>() != instance.duration(j, s)) {
        throw ParseError(0, fmt::format("record {}: duration disagrees with the instance", op_label({j, s})));
      }
      if (starts[id] != kUnscheduled) {
        throw ParseError(0, fmt::format("record {} appears more than once", op_label({j, s})));
      }
      starts[id] = rec.at("start").get<Time>();
      if (starts[id] == kUnscheduled) throw ParseError(0, "start time out of range");
    }
    auto schedule = schedule_from_starts(instance, std::move(starts));
    if (doc.contains("makespan") && doc["makespan"].get<Time>() != schedule.makespan) {
      throw ParseError(0, fmt::format("declared makespan {} differs from the start times' makespan {}",
                                      doc["makespan"].get<Time>(), schedule.makespan));
    }
    return schedule;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, fmt::format("malformed schedule JSON: {}", e.what()));
  }
}

std::string format_sequence(const OperationSequence& sequence) {
  std::string out;
  for (const auto& op : sequence.order) {
    if (!out.empty()) out += ' ';
    out += op_label(op);
  }
  return out;
}

}  // namespace eas
