#pragma once

#include <cstdint>
#include <stdexcept>

#include "eas/instance.hpp"
#include "eas/schedule.hpp"

namespace eas {

struct OracleResult {
  Time optimal_makespan = 0;
  OperationSequence optimal_sequence;
  std::uint64_t nodes_explored = 0;
};

class OracleSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kDefaultOracleOpLimit = 12;

/// Minimum semi-active makespan over every precedence-respecting sequence, by depth-first
/// enumeration. With `prune`, a branch is cut once its machine-load / job-tail bound reaches
/// the incumbent. Throws OracleSizeError when jobs * machines exceeds `op_limit`.
OracleResult exhaustive_optimum(const JobShopInstance& instance, int op_limit = kDefaultOracleOpLimit,
                                bool prune = true);

/// Makespan of the semi-active schedule for `sequence`, computed as the longest path through
/// the job chains and the machine chains the sequence induces. Shares no code with
/// build_schedule. Throws std::invalid_argument for sequences that are not valid for `instance`.
Time independent_decode(const JobShopInstance& instance, const OperationSequence& sequence);

}  // namespace eas
