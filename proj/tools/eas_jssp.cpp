// eas-jssp: elitist ant system for job-shop scheduling.
//
//   eas-jssp solve    <instance> [colony flags] [--gantt] [--trace FILE|-] [--format text|json]
//   eas-jssp validate <instance> <schedule.json>
//   eas-jssp bench    [instances...] [--instances LA01..LA05] [--runs N] [--format table|csv|json]
//   eas-jssp oracle   <instance> [--op-limit N] [--no-prune]
//   eas-jssp gantt    <instance> [--schedule FILE | --sequence "1 2 1 ..."] [colony flags]
//
// Exit codes: 0 success, 1 input or parse error, 2 constraint violations found by validate.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "eas/bench.hpp"
#include "eas/colony.hpp"
#include "eas/oracle.hpp"
#include "eas/schedule.hpp"

namespace {

using namespace eas;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitViolations = 2;

/// Colony flags mirror the ColonyParams field names; values given on the command line
/// override the configuration file, which overrides the defaults.
struct ColonyFlags {
  std::string config;
  std::optional<double> alpha, rho, q, elitist_weight, tau0, delay_penalty_per_unit;
  std::optional<int> cycles, ants;
  std::optional<Time> delay_limit;
  std::optional<std::string> elitist_target;

  void attach(CLI::App& app) {
    app.add_option("--config", config, "Parameter file with 'key = value' lines")->check(CLI::ExistingFile);
    app.add_option("--alpha", alpha, "Pheromone exponent in (0,1]; heuristic exponent is 1 - alpha (default 0.2)");
    app.add_option("--rho", rho, "Trail persistence per cycle in (0,1) (default 0.7)");
    app.add_option("--q", q, "Deposit constant Q (default 100)");
    app.add_option("--elitist-weight", elitist_weight, "Elitist weight e (default: number of jobs)");
    app.add_option("--cycles", cycles, "Number of cycles (default 1000)");
    app.add_option("--ants", ants, "Ants per cycle (default: ceil(jobs / 2))");
    app.add_option("--tau0", tau0, "Initial trail value (default 1.0)");
    app.add_option("--delay-limit", delay_limit, "Largest machine idle time an eligible operation may cause (default 5)");
    app.add_option("--delay-penalty-per-unit", delay_penalty_per_unit,
                   "Visibility reduction per unit of idle time (default 0.01)");
    app.add_option("--elitist-target", elitist_target, "Tour receiving the elitist deposit: cycle or global (default cycle)")
        ->check(CLI::IsMember({"cycle", "global"}));
  }

  ColonyParams resolve() const {
    ColonyParams p;
    if (!config.empty()) load_params_file(config, p);
    if (alpha) p.alpha = *alpha;
    if (rho) p.rho = *rho;
    if (q) p.q = *q;
    if (elitist_weight) p.elitist_weight = *elitist_weight;
    if (cycles) p.cycles = *cycles;
    if (ants) p.ants = *ants;
    if (tau0) p.tau0 = *tau0;
    if (delay_limit) p.delay_limit = *delay_limit;
    if (delay_penalty_per_unit) p.delay_penalty_per_unit = *delay_penalty_per_unit;
    if (elitist_target) apply_param(p, "elitist_target", *elitist_target);
    p.validate();
    return p;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, fmt::format("cannot open '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Job-list encoding: the k-th occurrence of job j (1-based labels) is step k of that job.
OperationSequence parse_job_list(const JobShopInstance& instance, const std::string& text) {
  OperationSequence seq;
  std::vector<int> next(instance.jobs(), 0);
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    int job = 0;
    try {
      job = std::stoi(token) - 1;
    } catch (const std::exception&) {
      throw ParseError(0, fmt::format("sequence token '{}' is not a job number", token));
    }
    if (job < 0 || job >= instance.jobs()) throw ParseError(0, fmt::format("sequence names unknown job {}", token));
    seq.order.push_back({job, next[job]++});
  }
  return seq;
}

int cmd_solve(const std::string& instance_arg, const ColonyFlags& flags, std::uint64_t seed, bool gantt,
              const std::string& trace_path, const std::string& format) {
  const auto instance = resolve_instance(instance_arg);
  auto params = flags.resolve();
  params.seed = seed;

  std::ofstream trace_file;
  std::ostream* trace_out = nullptr;
  if (trace_path == "-") {
    trace_out = &std::cout;
  } else if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file) throw ParseError(0, fmt::format("cannot write trace file '{}'", trace_path));
    trace_out = &trace_file;
  }
  TraceSink sink;
  if (trace_out) {
    sink = [trace_out](const CycleTrace& t) {
      *trace_out << fmt::format("{{\"cycle\":{},\"cycle_best\":{},\"global_best\":{}}}\n", t.cycle, t.cycle_best,
                                t.global_best);
    };
  }

  const auto result = run(instance, params, sink);
  const auto bks = find_bks(instance.name());

  if (format == "json") {
    auto doc = schedule_to_json(instance, result.best_schedule);
    doc["seed"] = seed;
    doc["ants"] = params.ants_for(instance);
    doc["cycles"] = params.cycles;
    doc["evaluations_total"] = result.evaluations_total;
    doc["evaluations_to_best"] = result.evaluations_to_best;
    doc["bks"] = bks ? nlohmann::json(*bks) : nlohmann::json(nullptr);
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << fmt::format("instance: {} ({}x{})\n", instance.name(), instance.jobs(), instance.machines());
    std::cout << fmt::format("best makespan: {}\n", result.best_makespan);
    if (bks) {
      std::cout << fmt::format("bks: {} (relative error {:.2f}%)\n", *bks, relative_error_pct(result.best_makespan, *bks));
    }
    std::cout << fmt::format("evaluations: {} total, best found at {}\n", result.evaluations_total,
                             result.evaluations_to_best);
    std::cout << "sequence: " << format_sequence(result.best_sequence) << "\n";
    if (gantt) std::cout << "\n" << render_gantt(instance, result.best_schedule);
  }
  return kExitOk;
}

int cmd_validate(const std::string& instance_arg, const std::string& schedule_path, const std::string& format) {
  const auto instance = resolve_instance(instance_arg);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(schedule_path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, fmt::format("{}: {}", schedule_path, e.what()));
  }
  const auto schedule = schedule_from_json(instance, doc);
  const auto report = validate(instance, schedule);
  if (format == "json") {
    auto out = nlohmann::ordered_json::object();
    out["feasible"] = report.feasible();
    out["makespan"] = schedule.makespan;
    auto list = nlohmann::ordered_json::array();
    for (const auto& v : report.violations) {
      nlohmann::ordered_json item;
      item["kind"] = to_string(v.kind);
      auto ops = nlohmann::ordered_json::array();
      for (const auto& op : v.operations) ops.push_back({{"job", op.job}, {"step", op.step}});
      item["operations"] = std::move(ops);
      item["message"] = v.message;
      list.push_back(std::move(item));
    }
    out["violations"] = std::move(list);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << report.to_text();
  }
  return report.feasible() ? kExitOk : kExitViolations;
}

int cmd_bench(std::vector<std::string> instances, const std::string& instance_spec, int runs, std::uint64_t seed,
              const std::string& format, unsigned jobs, bool timing, const ColonyFlags& flags) {
  const auto fmt_kind = parse_report_format(format);
  ExperimentConfig config;
  for (const auto& arg : instances) {
    for (auto& name : expand_instance_list(arg)) config.instances.push_back(std::move(name));
  }
  for (auto& name : expand_instance_list(instance_spec)) config.instances.push_back(std::move(name));
  if (config.instances.empty()) throw std::invalid_argument("bench needs at least one instance");
  config.runs_per_instance = runs;
  config.params = flags.resolve();
  config.base_seed = seed;
  config.workers = jobs;

  const auto result = run_experiment(config);
  for (const auto& w : result.warnings) std::cerr << fmt::format("warning: skipped {}: {}\n", w.instance, w.message);
  std::cout << emit_report(result.reports, fmt_kind, timing);
  return result.reports.empty() ? kExitInput : kExitOk;
}

int cmd_oracle(const std::string& instance_arg, int op_limit, bool no_prune, const std::string& format) {
  const auto instance = resolve_instance(instance_arg);
  const auto result = exhaustive_optimum(instance, op_limit, !no_prune);
  if (format == "json") {
    const auto schedule = build_schedule(instance, result.optimal_sequence);
    auto doc = schedule_to_json(instance, schedule);
    doc["optimal_makespan"] = result.optimal_makespan;
    doc["nodes_explored"] = result.nodes_explored;
    doc["pruning"] = !no_prune;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << fmt::format("instance: {} ({}x{})\n", instance.name(), instance.jobs(), instance.machines());
    std::cout << fmt::format("optimal makespan: {}\n", result.optimal_makespan);
    std::cout << fmt::format("nodes explored: {}\n", result.nodes_explored);
    std::cout << "witness: " << format_sequence(result.optimal_sequence) << "\n";
  }
  return kExitOk;
}

int cmd_gantt(const std::string& instance_arg, const std::string& schedule_path, const std::string& sequence_text,
              const ColonyFlags& flags, std::uint64_t seed) {
  const auto instance = resolve_instance(instance_arg);
  Schedule schedule;
  if (!schedule_path.empty()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(schedule_path));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(0, fmt::format("{}: {}", schedule_path, e.what()));
    }
    schedule = schedule_from_json(instance, doc);
  } else if (!sequence_text.empty()) {
    schedule = build_schedule(instance, parse_job_list(instance, sequence_text));
  } else {
    auto params = flags.resolve();
    params.seed = seed;
    schedule = run(instance, params).best_schedule;
  }
  std::cout << fmt::format("{} makespan {}\n", instance.name(), schedule.makespan);
  std::cout << render_gantt(instance, schedule);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elitist ant system solver for job-shop scheduling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "eas-jssp 1.0.0");

  std::uint64_t seed = 0;
  std::string format;

  auto* solve = app.add_subcommand("solve", "Run the colony once on an instance");
  std::string solve_instance, trace_path;
  bool solve_gantt = false;
  ColonyFlags solve_flags;
  solve->add_option("instance", solve_instance, "Instance file or LA name")->required();
  solve->add_option("--seed", seed, "Random seed (default 0)");
  solve_flags.attach(*solve);
  solve->add_flag("--gantt", solve_gantt, "Append a text Gantt chart of the best schedule");
  solve->add_option("--trace", trace_path, "Write per-cycle JSON lines to FILE ('-' for standard output)");
  solve->add_option("--format", format, "Output format: text or json")->check(CLI::IsMember({"text", "json"}));

  auto* validate_cmd = app.add_subcommand("validate", "Check a schedule JSON against an instance");
  std::string validate_instance, schedule_path;
  validate_cmd->add_option("instance", validate_instance, "Instance file or LA name")->required();
  validate_cmd->add_option("schedule", schedule_path, "Schedule JSON file")->required();
  validate_cmd->add_option("--format", format, "Output format: text or json")->check(CLI::IsMember({"text", "json"}));

  auto* bench = app.add_subcommand("bench", "Repeated runs per instance with summary statistics");
  std::vector<std::string> bench_positional;
  std::string instance_spec;
  int runs = 30;
  unsigned jobs = 0;
  bool timing = false;
  ColonyFlags bench_flags;
  bench->add_option("instance", bench_positional, "Instance files, LA names or ranges");
  bench->add_option("--instances", instance_spec, "Comma-separated names, paths or ranges such as LA01..LA05");
  bench->add_option("--runs", runs, "Runs per instance (default 30)")->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed, "Base seed; run r uses seed + r (default 0)");
  bench->add_option("--format", format, "Report format: table, csv or json (default table)")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  bench->add_option("--jobs", jobs, "Worker threads (default: hardware concurrency)");
  bench->add_flag("--timing", timing, "Include wall-clock milliseconds per run in the report");
  bench_flags.attach(*bench);

  auto* oracle = app.add_subcommand("oracle", "Exact semi-active optimum of a tiny instance");
  std::string oracle_instance;
  int op_limit = kDefaultOracleOpLimit;
  bool no_prune = false;
  oracle->add_option("instance", oracle_instance, "Instance file or LA name")->required();
  oracle->add_option("--op-limit", op_limit, "Refuse instances with more operations (default 12)");
  oracle->add_flag("--no-prune", no_prune, "Disable bound pruning");
  oracle->add_option("--format", format, "Output format: text or json")->check(CLI::IsMember({"text", "json"}));

  auto* gantt = app.add_subcommand("gantt", "Render a schedule as a text Gantt chart");
  std::string gantt_instance, gantt_schedule, gantt_sequence;
  ColonyFlags gantt_flags;
  gantt->add_option("instance", gantt_instance, "Instance file or LA name")->required();
  gantt->add_option("--schedule", gantt_schedule, "Schedule JSON to render");
  gantt->add_option("--sequence", gantt_sequence, "Job-list sequence to decode, e.g. \"1 2 3 1 2 3 1 2 3\"");
  gantt->add_option("--seed", seed, "Random seed when solving (default 0)");
  gantt_flags.attach(*gantt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*solve) return cmd_solve(solve_instance, solve_flags, seed, solve_gantt, trace_path, format.empty() ? "text" : format);
    if (*validate_cmd) return cmd_validate(validate_instance, schedule_path, format.empty() ? "text" : format);
    if (*bench) {
      return cmd_bench(bench_positional, instance_spec, runs, seed, format.empty() ? "table" : format, jobs, timing,
                       bench_flags);
    }
    if (*oracle) return cmd_oracle(oracle_instance, op_limit, no_prune, format.empty() ? "text" : format);
    if (*gantt) return cmd_gantt(gantt_instance, gantt_schedule, gantt_sequence, gantt_flags, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
