#pragma once

#include <random>
#include <string>
#include <vector>

#include "eas/instance.hpp"
#include "eas/schedule.hpp"

namespace eas::testing {

// 3x3 example with machines renumbered from 1..3 to 0..2 (M1 -> 0, M2 -> 1, M3 -> 2).
inline constexpr const char* kExample3x3Text =
    "# 3x3 example instance\n"
    "3 3\n"
    "2 4 1 3 0 3\n"
    "1 1 2 2 0 4\n"
    "1 3 0 2 2 3\n";

inline JobShopInstance example3x3() { return parse_instance(kExample3x3Text, "EX3X3"); }

inline JobShopInstance instance_from_rows(std::string name, const std::vector<std::vector<std::pair<int, Time>>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(rows.front().size());
  IndexMatrix machines(n, m);
  TimeMatrix durations(n, m);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index s = 0; s < m; ++s) {
      machines(j, s) = rows[j][s].first;
      durations(j, s) = rows[j][s].second;
    }
  }
  return JobShopInstance(std::move(name), std::move(machines), std::move(durations));
}

inline JobShopInstance random_instance(std::mt19937_64& gen, int jobs, int machines, Time max_duration = 20) {
  IndexMatrix route(jobs, machines);
  TimeMatrix durations(jobs, machines);
  std::vector<int> perm(machines);
  std::uniform_int_distribution<Time> dur(1, max_duration);
  for (int j = 0; j < jobs; ++j) {
    for (int k = 0; k < machines; ++k) perm[k] = k;
    std::shuffle(perm.begin(), perm.end(), gen);
    for (int s = 0; s < machines; ++s) {
      route(j, s) = perm[s];
      durations(j, s) = dur(gen);
    }
  }
  return JobShopInstance("RAND", std::move(route), std::move(durations));
}

/// Uniformly shuffled job-list, read back as an operation sequence (always precedence-respecting).
inline OperationSequence random_sequence(std::mt19937_64& gen, const JobShopInstance& instance) {
  std::vector<int> jobs;
  for (int j = 0; j < instance.jobs(); ++j) {
    for (int s = 0; s < instance.machines(); ++s) jobs.push_back(j);
  }
  std::shuffle(jobs.begin(), jobs.end(), gen);
  OperationSequence seq;
  std::vector<int> next(instance.jobs(), 0);
  for (int j : jobs) seq.order.push_back({j, next[j]++});
  return seq;
}

/// A random tiny instance with at most `max_ops` operations.
inline JobShopInstance random_tiny_instance(std::mt19937_64& gen, int max_ops) {
  std::uniform_int_distribution<int> pick(1, 4);
  for (;;) {
    const int n = pick(gen), m = pick(gen);
    if (n * m <= max_ops) return random_instance(gen, n, m, 9);
  }
}

}  // namespace eas::testing
