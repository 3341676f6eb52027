#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "eas/instance.hpp"
#include "eas/pheromone.hpp"
#include "eas/rng.hpp"
#include "eas/schedule.hpp"

namespace eas {

/// Dispatching rule that shapes an ant's visibility: SPT favours short operations, LPT long ones.
enum class Rule { Spt, Lpt };

/// Which tour receives the elitist deposit each cycle.
enum class ElitistTarget { CycleBest, GlobalBest };

const char* to_string(Rule rule) noexcept;
const char* to_string(ElitistTarget target) noexcept;

struct ColonyParams {
  double alpha = 0.2;                      ///< pheromone exponent; the heuristic exponent is 1 - alpha
  double rho = 0.7;                        ///< fraction of the old trail kept each cycle
  double q = 100.0;                        ///< deposit constant
  std::optional<double> elitist_weight;    ///< e; defaults to the job count
  int cycles = 1000;
  std::optional<int> ants;                 ///< K; defaults to ceil(jobs / 2)
  double tau0 = 1.0;
  Time delay_limit = 5;                    ///< max machine idle time an eligible operation may cause
  double delay_penalty_per_unit = 0.01;    ///< visibility loss per unit of machine idle time
  std::uint64_t seed = 0;
  ElitistTarget elitist_target = ElitistTarget::CycleBest;

  double beta() const noexcept { return 1.0 - alpha; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  int ants_for(const JobShopInstance& instance) const;
  double elitist_weight_for(const JobShopInstance& instance) const;
};

/// ceil(jobs / 2), so every instance gets at least one ant.
int default_ant_count(const JobShopInstance& instance) noexcept;

struct AntState {
  OperationSequence tabu;
  Rule rule = Rule::Spt;
  std::vector<Time> job_ready;      ///< completion of each job's last scheduled operation
  std::vector<Time> machine_ready;  ///< release time of each machine
  std::vector<int> next_step;       ///< first unvisited step per job
  Eigen::Index current_node = PheromoneField<double>::kSource;

  AntState(const JobShopInstance& instance, Rule rule);
  bool complete(const JobShopInstance& instance) const noexcept {
    return tabu.order.size() == static_cast<std::size_t>(instance.operation_count());
  }
  /// Appends the job's next operation and advances both ready times (semi-active placement).
  void visit(const JobShopInstance& instance, int job);
};

struct Candidate {
  OpRef op;
  int machine = 0;
  Time duration = 0;
  Time delay = 0;  ///< machine idle time caused by starting this operation next on its machine
};

/// Next operation of every unfinished job whose delay is within `delay_limit`. When every
/// candidate exceeds the limit, the minimal-delay candidates are admitted so construction
/// always progresses.
std::vector<Candidate> eligible_set(const JobShopInstance& instance, const AntState& ant, Time delay_limit);
void eligible_set(const JobShopInstance& instance, const AntState& ant, Time delay_limit,
                  std::vector<Candidate>& out);

/// eta = base * (1 - penalty_per_unit * delay); base is 1/duration (SPT) or duration (LPT).
double visibility(Time duration, Rule rule, Time delay, double penalty_per_unit) noexcept;

struct Construction {
  OperationSequence sequence;
  Schedule schedule;
  Rule rule = Rule::Spt;
};

/// One ant: draws its rule (fair coin), its first operation uniformly among the jobs'
/// first steps, then repeatedly samples the transition distribution over the eligible set.
Construction construct_solution(const JobShopInstance& instance, const PheromoneField<double>& field,
                                const ColonyParams& params, Rng& rng);

std::vector<Eigen::Index> path_nodes(const JobShopInstance& instance, const OperationSequence& sequence);

struct BestResult {
  OperationSequence best_sequence;
  Schedule best_schedule;
  Time best_makespan = 0;
  std::uint64_t evaluations_total = 0;
  std::uint64_t evaluations_to_best = 0;  ///< 1-based count at which the best was first built
  std::vector<Time> per_cycle_best;
};

struct CycleTrace {
  int cycle = 0;
  Time cycle_best = 0;
  Time global_best = 0;
};

using TraceSink = std::function<void(const CycleTrace&)>;

/// Full elitist ant system run. Deterministic for a given (instance, params).
BestResult run(const JobShopInstance& instance, const ColonyParams& params, const TraceSink& trace = {});

/// Parses `key = value` lines (keys named as the ColonyParams fields, '#' comments) onto `params`.
void apply_params_text(std::string_view text, ColonyParams& params);
void apply_param(ColonyParams& params, std::string_view key, std::string_view value);
void load_params_file(const std::filesystem::path& path, ColonyParams& params);

}  // namespace eas
