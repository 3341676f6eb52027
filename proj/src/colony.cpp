#include "eas/colony.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace eas {

const char* to_string(Rule rule) noexcept { return rule == Rule::Spt ? "SPT" : "LPT"; }

const char* to_string(ElitistTarget target) noexcept {
  return target == ElitistTarget::CycleBest ? "cycle" : "global";
}

void ColonyParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("invalid colony parameter: " + what); };
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(fmt::format("alpha = {} not in (0, 1]", alpha));
  if (!(rho > 0.0 && rho < 1.0)) fail(fmt::format("rho = {} not in (0, 1)", rho));
  if (!(q > 0.0) || !std::isfinite(q)) fail(fmt::format("q = {} must be positive", q));
  if (elitist_weight && !(*elitist_weight >= 0.0 && std::isfinite(*elitist_weight))) {
    fail(fmt::format("elitist_weight = {} must be >= 0", *elitist_weight));
  }
  if (cycles < 1) fail(fmt::format("cycles = {} must be >= 1", cycles));
  if (ants && *ants < 1) fail(fmt::format("ants = {} must be >= 1", *ants));
  if (!(tau0 > 0.0) || !std::isfinite(tau0)) fail(fmt::format("tau0 = {} must be positive", tau0));
  if (delay_limit < 0) fail(fmt::format("delay_limit = {} must be >= 0", delay_limit));
  if (!(delay_penalty_per_unit >= 0.0) || !(delay_penalty_per_unit * static_cast<double>(delay_limit) < 1.0)) {
    fail(fmt::format("delay_penalty_per_unit = {} with delay_limit = {} must keep visibility positive",
                     delay_penalty_per_unit, delay_limit));
  }
}

int default_ant_count(const JobShopInstance& instance) noexcept { return (instance.jobs() + 1) / 2; }

int ColonyParams::ants_for(const JobShopInstance& instance) const {
  return ants.value_or(default_ant_count(instance));
}

double ColonyParams::elitist_weight_for(const JobShopInstance& instance) const {
  return elitist_weight.value_or(static_cast<double>(instance.jobs()));
}

AntState::AntState(const JobShopInstance& instance, Rule r)
    : rule(r),
      job_ready(instance.jobs(), 0),
      machine_ready(instance.machines(), 0),
      next_step(instance.jobs(), 0) {
  tabu.order.reserve(instance.operation_count());
}

void AntState::visit(const JobShopInstance& instance, int job) {
  const int step = next_step[job]++;
  const int machine = instance.machine(job, step);
  const Time end = std::max(job_ready[job], machine_ready[machine]) + instance.duration(job, step);
  job_ready[job] = end;
  machine_ready[machine] = end;
  tabu.order.push_back({job, step});
  current_node = PheromoneField<double>::node_of(instance.op_id(job, step));
}

void eligible_set(const JobShopInstance& instance, const AntState& ant, Time delay_limit,
                  std::vector<Candidate>& out) {
  out.clear();
  Time min_delay = std::numeric_limits<Time>::max();
  for (int j = 0; j < instance.jobs(); ++j) {
    const int s = ant.next_step[j];
    if (s >= instance.machines()) continue;
    const int k = instance.machine(j, s);
    const Time delay = std::max<Time>(0, ant.job_ready[j] - ant.machine_ready[k]);
    min_delay = std::min(min_delay, delay);
    if (delay <= delay_limit) out.push_back({{j, s}, k, instance.duration(j, s), delay});
  }
  if (!out.empty() || min_delay == std::numeric_limits<Time>::max()) return;
  for (int j = 0; j < instance.jobs(); ++j) {
    const int s = ant.next_step[j];
    if (s >= instance.machines()) continue;
    const int k = instance.machine(j, s);
    const Time delay = std::max<Time>(0, ant.job_ready[j] - ant.machine_ready[k]);
    if (delay == min_delay) out.push_back({{j, s}, k, instance.duration(j, s), delay});
  }
}

std::vector<Candidate> eligible_set(const JobShopInstance& instance, const AntState& ant, Time delay_limit) {
  std::vector<Candidate> out;
  eligible_set(instance, ant, delay_limit, out);
  return out;
}

double visibility(Time duration, Rule rule, Time delay, double penalty_per_unit) noexcept {
  const double d = static_cast<double>(duration);
  const double base = rule == Rule::Spt ? 1.0 / d : d;
  return base * (1.0 - penalty_per_unit * static_cast<double>(delay));
}

std::vector<Eigen::Index> path_nodes(const JobShopInstance& instance, const OperationSequence& sequence) {
  std::vector<Eigen::Index> nodes;
  nodes.reserve(sequence.order.size());
  for (const auto& op : sequence.order) nodes.push_back(PheromoneField<double>::node_of(instance.op_id(op.job, op.step)));
  return nodes;
}

namespace {

using Matrix = PheromoneField<double>::Matrix;

/// eta^beta split into a per-operation base factor and a per-delay penalty factor, so the
/// construction loop never calls pow.
class VisibilityPowers {
 public:
  VisibilityPowers(const JobShopInstance& instance, const ColonyParams& params) {
    const double beta = params.beta();
    const int count = instance.operation_count();
    spt_.resize(count);
    lpt_.resize(count);
    for (int id = 0; id < count; ++id) {
      const Time d = instance.duration(instance.job_of(id), instance.step_of(id));
      spt_[id] = std::pow(visibility(d, Rule::Spt, 0, 0.0), beta);
      lpt_[id] = std::pow(visibility(d, Rule::Lpt, 0, 0.0), beta);
    }
    penalty_.resize(static_cast<std::size_t>(params.delay_limit) + 1);
    for (std::size_t t = 0; t < penalty_.size(); ++t) {
      penalty_[t] = std::pow(1.0 - params.delay_penalty_per_unit * static_cast<double>(t), beta);
    }
  }

  /// Delays beyond the limit (only admitted when nothing else is eligible) take the limit's penalty.
  double eta_pow(int op_id, Rule rule, Time delay) const {
    const auto t = std::min(static_cast<std::size_t>(delay), penalty_.size() - 1);
    return (rule == Rule::Spt ? spt_[op_id] : lpt_[op_id]) * penalty_[t];
  }

 private:
  std::vector<double> spt_, lpt_, penalty_;
};

struct Workspace {
  std::vector<Candidate> candidates;
  Eigen::VectorXd weights;
};

Construction construct_with(const JobShopInstance& instance, const Matrix& powered_trails,
                            const VisibilityPowers& powers, const ColonyParams& params, Rng& rng, Workspace& ws) {
  const Rule rule = rng.coin() ? Rule::Spt : Rule::Lpt;
  AntState ant(instance, rule);
  ant.visit(instance, rng.below(instance.jobs()));
  while (!ant.complete(instance)) {
    eligible_set(instance, ant, params.delay_limit, ws.candidates);
    ws.weights.resize(static_cast<Eigen::Index>(ws.candidates.size()));
    for (std::size_t i = 0; i < ws.candidates.size(); ++i) {
      const auto& c = ws.candidates[i];
      const int id = instance.op_id(c.op.job, c.op.step);
      ws.weights[static_cast<Eigen::Index>(i)] =
          powered_trails(ant.current_node, PheromoneField<double>::node_of(id)) * powers.eta_pow(id, rule, c.delay);
    }
    ws.weights /= ws.weights.sum();
    const auto pick = select_next(ws.weights, rng);
    ant.visit(instance, ws.candidates[static_cast<std::size_t>(pick)].op.job);
  }
  auto schedule = build_schedule(instance, ant.tabu);
  return {std::move(ant.tabu), std::move(schedule), rule};
}

}  // namespace

Construction construct_solution(const JobShopInstance& instance, const PheromoneField<double>& field,
                                const ColonyParams& params, Rng& rng) {
  params.validate();
  const Matrix powered = field.trails().array().pow(params.alpha).matrix();
  const VisibilityPowers powers(instance, params);
  Workspace ws;
  return construct_with(instance, powered, powers, params, rng, ws);
}

BestResult run(const JobShopInstance& instance, const ColonyParams& params, const TraceSink& trace) {
  params.validate();
  const int ants = params.ants_for(instance);
  const double elitist_weight = params.elitist_weight_for(instance);

  PheromoneField<double> field(instance.operation_count(), params.tau0);
  const VisibilityPowers powers(instance, params);
  Rng rng(params.seed);
  Workspace ws;
  Matrix powered;

  BestResult best;
  best.best_makespan = std::numeric_limits<Time>::max();
  best.per_cycle_best.reserve(static_cast<std::size_t>(params.cycles));
  Tour global_tour;
  std::vector<Tour> tours(static_cast<std::size_t>(ants));

  for (int cycle = 0; cycle < params.cycles; ++cycle) {
    powered = field.trails().array().pow(params.alpha).matrix();
    Time cycle_best = std::numeric_limits<Time>::max();
    for (int k = 0; k < ants; ++k) {
      auto built = construct_with(instance, powered, powers, params, rng, ws);
      ++best.evaluations_total;
      const Time makespan = built.schedule.makespan;
      tours[k].nodes = path_nodes(instance, built.sequence);
      tours[k].makespan = makespan;
      cycle_best = std::min(cycle_best, makespan);
      if (makespan < best.best_makespan) {
        best.best_makespan = makespan;
        best.evaluations_to_best = best.evaluations_total;
        best.best_sequence = std::move(built.sequence);
        best.best_schedule = std::move(built.schedule);
        global_tour = tours[k];
      }
    }
    best.per_cycle_best.push_back(cycle_best);

    const Tour* elite = params.elitist_target == ElitistTarget::GlobalBest ? &global_tour : nullptr;
    accumulate_deposits<double>(field, tours, params.q, elitist_weight, elite);
    update_pheromone(field, params.rho);

    if (trace) trace({cycle, cycle_best, best.best_makespan});
  }
  return best;
}

}  // namespace eas
