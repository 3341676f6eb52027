#include "eas/oracle.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include <fmt/format.h>

namespace eas {

Time independent_decode(const JobShopInstance& instance, const OperationSequence& sequence) {
  const int n = instance.jobs();
  const int m = instance.machines();
  const int count = n * m;
  if (static_cast<int>(sequence.order.size()) != count) {
    throw std::invalid_argument(fmt::format("sequence length {} != {}", sequence.order.size(), count));
  }

  // position of every operation in the sequence
  std::vector<int> position(count, -1);
  for (int i = 0; i < count; ++i) {
    const auto [j, s] = sequence.order[i];
    if (j < 0 || j >= n || s < 0 || s >= m) throw std::invalid_argument("sequence names an unknown operation");
    auto& slot = position[j * m + s];
    if (slot != -1) throw std::invalid_argument("sequence repeats an operation");
    slot = i;
  }
  for (int j = 0; j < n; ++j) {
    for (int s = 1; s < m; ++s) {
      if (position[j * m + s] < position[j * m + s - 1]) {
        throw std::invalid_argument(fmt::format("job {} step {} precedes step {}", j, s, s - 1));
      }
    }
  }

  // Successor lists: job chain edges plus machine chain edges in sequence order.
  std::vector<std::vector<int>> successors(count);
  std::vector<int> indegree(count, 0);
  auto link = [&](int from, int to) {
    successors[from].push_back(to);
    ++indegree[to];
  };
  for (int j = 0; j < n; ++j) {
    for (int s = 1; s < m; ++s) link(j * m + s - 1, j * m + s);
  }
  std::vector<int> last_on_machine(m, -1);
  for (const auto& [j, s] : sequence.order) {
    const int id = j * m + s;
    const int k = instance.machine(j, s);
    if (last_on_machine[k] >= 0) link(last_on_machine[k], id);
    last_on_machine[k] = id;
  }

  // Kahn traversal; head[v] is the longest path length reaching v.
  std::vector<Time> head(count, 0);
  std::queue<int> ready;
  for (int v = 0; v < count; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  Time longest = 0;
  int visited = 0;
  while (!ready.empty()) {
    const int v = ready.front();
    ready.pop();
    ++visited;
    const Time tail = head[v] + instance.duration(v / m, v % m);
    longest = std::max(longest, tail);
    for (int w : successors[v]) {
      head[w] = std::max(head[w], tail);
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (visited != count) throw std::logic_error("induced precedence graph has a cycle");
  return longest;
}

namespace {

class Enumerator {
 public:
  Enumerator(const JobShopInstance& instance, bool prune)
      : inst_(instance),
        prune_(prune),
        next_(instance.jobs(), 0),
        job_end_(instance.jobs(), 0),
        machine_end_(instance.machines(), 0),
        job_left_(instance.jobs(), 0),
        machine_left_(instance.machines(), 0) {
    for (int j = 0; j < inst_.jobs(); ++j) {
      for (int s = 0; s < inst_.machines(); ++s) {
        job_left_[j] += inst_.duration(j, s);
        machine_left_[inst_.machine(j, s)] += inst_.duration(j, s);
      }
    }
    path_.reserve(inst_.operation_count());
  }

  OracleResult solve() {
    descend(0);
    return {incumbent_, OperationSequence{best_path_}, nodes_};
  }

 private:
  Time bound() const {
    Time lb = 0;
    for (std::size_t j = 0; j < job_end_.size(); ++j) lb = std::max(lb, job_end_[j] + job_left_[j]);
    for (std::size_t k = 0; k < machine_end_.size(); ++k) lb = std::max(lb, machine_end_[k] + machine_left_[k]);
    return lb;
  }

  void descend(Time partial) {
    ++nodes_;
    if (path_.size() == static_cast<std::size_t>(inst_.operation_count())) {
      if (partial < incumbent_) {
        incumbent_ = partial;
        best_path_ = path_;
      }
      return;
    }
    if (prune_ && bound() >= incumbent_) return;
    for (int j = 0; j < inst_.jobs(); ++j) {
      const int s = next_[j];
      if (s == inst_.machines()) continue;
      const int k = inst_.machine(j, s);
      const Time d = inst_.duration(j, s);
      const Time saved_job = job_end_[j];
      const Time saved_machine = machine_end_[k];
      const Time finish = std::max(saved_job, saved_machine) + d;

      job_end_[j] = machine_end_[k] = finish;
      job_left_[j] -= d;
      machine_left_[k] -= d;
      ++next_[j];
      path_.push_back({j, s});

      descend(std::max(partial, finish));

      path_.pop_back();
      --next_[j];
      job_left_[j] += d;
      machine_left_[k] += d;
      job_end_[j] = saved_job;
      machine_end_[k] = saved_machine;
    }
  }

  const JobShopInstance& inst_;
  bool prune_;
  std::vector<int> next_;
  std::vector<Time> job_end_, machine_end_, job_left_, machine_left_;
  std::vector<OpRef> path_, best_path_;
  Time incumbent_ = std::numeric_limits<Time>::max();
  std::uint64_t nodes_ = 0;
};

}  // namespace

OracleResult exhaustive_optimum(const JobShopInstance& instance, int op_limit, bool prune) {
  if (instance.operation_count() > op_limit) {
    throw OracleSizeError(fmt::format("instance {} has {} x {} = {} operations, oracle limit is {}", instance.name(),
                                      instance.jobs(), instance.machines(), instance.operation_count(), op_limit));
  }
  return Enumerator(instance, prune).solve();
}

}  // namespace eas
