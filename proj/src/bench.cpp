#include "eas/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace eas {

double relative_error_pct(Time best, Time bks) noexcept {
  return 100.0 * static_cast<double>(best - bks) / static_cast<double>(bks);
}

RunReport summarize(std::string instance, int jobs, int machines, std::optional<Time> bks, std::vector<RunOutcome> runs) {
  if (runs.empty()) throw std::invalid_argument("cannot summarize zero runs");
  RunReport r;
  r.instance = std::move(instance);
  r.jobs = jobs;
  r.machines = machines;
  r.bks = bks;
  const double n = static_cast<double>(runs.size());
  r.best = runs.front().best;
  double sum = 0.0;
  for (const auto& run : runs) {
    r.best = std::min(r.best, run.best);
    sum += static_cast<double>(run.best);
    r.avg_evals_to_best += static_cast<double>(run.evaluations_to_best);
    r.avg_evals_total += static_cast<double>(run.evaluations_total);
    r.avg_wall_ms += run.wall_ms;
  }
  r.mean = sum / n;
  double squares = 0.0;
  for (const auto& run : runs) squares += (static_cast<double>(run.best) - r.mean) * (static_cast<double>(run.best) - r.mean);
  r.stddev = std::sqrt(squares / n);
  r.avg_evals_to_best /= n;
  r.avg_evals_total /= n;
  r.avg_wall_ms /= n;
  if (bks) r.relative_error_pct = relative_error_pct(r.best, *bks);
  r.runs = std::move(runs);
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.runs_per_instance < 1) throw std::invalid_argument("runs_per_instance must be >= 1");
  config.params.validate();

  ExperimentResult result;
  std::vector<JobShopInstance> instances;
  for (const auto& name : config.instances) {
    try {
      instances.push_back(resolve_instance(name));
    } catch (const std::exception& e) {
      result.warnings.push_back({name, e.what()});
    }
  }

  const int runs = config.runs_per_instance;
  const std::size_t tasks = instances.size() * static_cast<std::size_t>(runs);
  std::vector<RunOutcome> outcomes(tasks);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      const auto& instance = instances[t / static_cast<std::size_t>(runs)];
      ColonyParams params = config.params;
      params.seed = run_seed(config.base_seed, static_cast<int>(t % static_cast<std::size_t>(runs)));
      const auto started = std::chrono::steady_clock::now();
      const auto best = run(instance, params);
      const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - started;
      outcomes[t] = {best.best_makespan, best.evaluations_to_best, best.evaluations_total, elapsed.count()};
    }
  };

  unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    std::vector<RunOutcome> mine(outcomes.begin() + static_cast<std::ptrdiff_t>(i * runs),
                                 outcomes.begin() + static_cast<std::ptrdiff_t>((i + 1) * runs));
    result.reports.push_back(summarize(inst.name(), inst.jobs(), inst.machines(), find_bks(inst.name()), std::move(mine)));
  }
  return result;
}

SizeAggregate aggregate_by_size(std::span<const RunReport> reports) {
  SizeAggregate agg;
  std::vector<double> sums;
  double total = 0.0;
  std::size_t counted = 0;
  for (const auto& r : reports) {
    if (!r.relative_error_pct) continue;
    auto it = std::find_if(agg.groups.begin(), agg.groups.end(),
                           [&](const SizeGroup& g) { return g.jobs == r.jobs && g.machines == r.machines; });
    if (it == agg.groups.end()) {
      agg.groups.push_back({r.jobs, r.machines, 0, 0.0});
      sums.push_back(0.0);
      it = agg.groups.end() - 1;
    }
    const auto g = static_cast<std::size_t>(it - agg.groups.begin());
    ++it->count;
    sums[g] += *r.relative_error_pct;
    total += *r.relative_error_pct;
    ++counted;
  }
  for (std::size_t g = 0; g < agg.groups.size(); ++g) {
    agg.groups[g].mean_relative_error_pct = sums[g] / static_cast<double>(agg.groups[g].count);
  }
  agg.grand_mean_pct = counted ? total / static_cast<double>(counted) : 0.0;
  return agg;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw std::invalid_argument(fmt::format("unknown report format '{}' (expected table, csv or json)", name));
}

namespace {

std::string csv(std::span<const RunReport> reports, bool timing) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : reports) {
    out += fmt::format("{},{},{},{},{},{},{:.2f},{:.2f},{:.1f},{:.1f},{}\n", r.instance, r.jobs, r.machines,
                       r.bks ? fmt::format("{}", *r.bks) : "", r.best,
                       r.relative_error_pct ? fmt::format("{:.2f}", *r.relative_error_pct) : "", r.mean, r.stddev,
                       r.avg_evals_to_best, r.avg_evals_total, timing ? fmt::format("{:.1f}", r.avg_wall_ms) : "");
  }
  return out;
}

std::string json(std::span<const RunReport> reports, bool timing) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json row;
    row["instance"] = r.instance;
    row["jobs"] = r.jobs;
    row["machines"] = r.machines;
    row["bks"] = r.bks ? nlohmann::ordered_json(*r.bks) : nlohmann::ordered_json(nullptr);
    row["best"] = r.best;
    row["rel_err_pct"] = r.relative_error_pct ? nlohmann::ordered_json(*r.relative_error_pct) : nlohmann::ordered_json(nullptr);
    row["mean"] = r.mean;
    row["stddev"] = r.stddev;
    row["avg_evals_to_best"] = r.avg_evals_to_best;
    row["avg_evals_total"] = r.avg_evals_total;
    row["avg_wall_ms"] = timing ? nlohmann::ordered_json(r.avg_wall_ms) : nlohmann::ordered_json(nullptr);
    doc.push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

std::string table(std::span<const RunReport> reports, bool timing) {
  constexpr auto kRow = "{:<10} {:>7} {:>6} {:>6} {:>9} {:>9} {:>7} {:>12} {:>12} {:>10}\n";
  std::string out = fmt::format(kRow, "instance", "size", "bks", "best", "rel_err%", "mean", "stddev",
                                "evals->best", "evals_total", "wall_ms");
  if (reports.empty()) return out;
  for (const auto& r : reports) {
    out += fmt::format(kRow, r.instance, fmt::format("{}x{}", r.jobs, r.machines),
                       r.bks ? fmt::format("{}", *r.bks) : "-", r.best,
                       r.relative_error_pct ? fmt::format("{:.2f}", *r.relative_error_pct) : "-",
                       fmt::format("{:.1f}", r.mean), fmt::format("{:.1f}", r.stddev),
                       fmt::format("{:.1f}", r.avg_evals_to_best), fmt::format("{:.1f}", r.avg_evals_total),
                       timing ? fmt::format("{:.1f}", r.avg_wall_ms) : "-");
  }
  const auto agg = aggregate_by_size(reports);
  if (!agg.groups.empty()) {
    out += "\nmean relative error by size:\n";
    for (const auto& g : agg.groups) {
      out += fmt::format("  {:>5}  {:>6.2f}%  ({} instance{})\n", fmt::format("{}x{}", g.jobs, g.machines),
                         g.mean_relative_error_pct, g.count, g.count == 1 ? "" : "s");
    }
    out += fmt::format("  {:>5}  {:>6.2f}%\n", "all", agg.grand_mean_pct);
  }
  out += "\nreference: average objective-function evaluations reported for LA01-LA40\n";
  out += "  EAS 3307 | AIS 175058 | CULT 454525 | TS 11108\n";
  return out;
}

}  // namespace

std::string emit_report(std::span<const RunReport> reports, ReportFormat format, bool timing) {
  switch (format) {
    case ReportFormat::Csv: return csv(reports, timing);
    case ReportFormat::Json: return json(reports, timing);
    case ReportFormat::Table: return table(reports, timing);
  }
  throw std::invalid_argument("unknown report format");
}

namespace {

// "LA07" -> ("LA", 7, 2)
bool split_numbered(std::string_view token, std::string& prefix, int& number, std::size_t& width) {
  const auto digits = token.find_first_of("0123456789");
  if (digits == std::string_view::npos || digits == 0) return false;
  if (token.find_first_not_of("0123456789", digits) != std::string_view::npos) return false;
  prefix = std::string(token.substr(0, digits));
  width = token.size() - digits;
  number = std::stoi(std::string(token.substr(digits)));
  return true;
}

std::string_view trimmed(std::string_view s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string_view::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

}  // namespace

std::vector<std::string> expand_instance_list(std::string_view spec) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto comma = std::min(spec.find(',', pos), spec.size());
    const auto token = trimmed(spec.substr(pos, comma - pos));
    pos = comma + 1;
    if (token.empty()) continue;
    const auto dots = token.find("..");
    if (dots == std::string_view::npos) {
      out.emplace_back(token);
      continue;
    }
    std::string lo_prefix, hi_prefix;
    int lo = 0, hi = 0;
    std::size_t lo_width = 0, hi_width = 0;
    const auto hi_token = token.substr(dots + 2);
    if (!split_numbered(token.substr(0, dots), lo_prefix, lo, lo_width)) {
      throw std::invalid_argument(fmt::format("malformed instance range '{}'", token));
    }
    if (!split_numbered(hi_token, hi_prefix, hi, hi_width)) {
      hi_prefix = lo_prefix;  // "LA01..05"
      hi_width = lo_width;
      if (hi_token.empty() || hi_token.find_first_not_of("0123456789") != std::string_view::npos) {
        throw std::invalid_argument(fmt::format("malformed instance range '{}'", token));
      }
      hi = std::stoi(std::string(hi_token));
    }
    if (lo_prefix != hi_prefix || hi < lo) throw std::invalid_argument(fmt::format("malformed instance range '{}'", token));
    for (int i = lo; i <= hi; ++i) out.push_back(fmt::format("{}{:0{}}", lo_prefix, i, lo_width));
  }
  return out;
}

}  // namespace eas
