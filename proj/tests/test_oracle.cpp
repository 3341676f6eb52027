#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eas/oracle.hpp"
#include "test_support.hpp"

using namespace eas;

TEST_CASE("2x2 optimum meets the machine-load bound") {
  const auto inst = testing::instance_from_rows("TWO", {{{0, 2}, {1, 2}}, {{1, 3}, {0, 1}}});
  const auto result = exhaustive_optimum(inst);
  CHECK(result.optimal_makespan == 5);
  CHECK(inst.machine_load(1) == 5);
  CHECK(independent_decode(inst, result.optimal_sequence) == 5);
}

TEST_CASE("single job has one sequence") {
  const auto inst = testing::instance_from_rows("J", {{{1, 4}, {0, 3}, {2, 3}}});
  const auto result = exhaustive_optimum(inst);
  CHECK(result.optimal_makespan == 10);
  CHECK(result.nodes_explored == 4);
  CHECK(independent_decode(inst, {{{0, 0}, {0, 1}, {0, 2}}}) == 10);
}

TEST_CASE("3x3 example optimum") {
  // 13, confirmed by a separate brute force over all 1680 job-list permutations
  const auto inst = testing::example3x3();
  const auto result = exhaustive_optimum(inst);
  CHECK(result.optimal_makespan == 13);
  CHECK(build_schedule(inst, result.optimal_sequence).makespan == 13);
  CHECK(exhaustive_optimum(inst, 12, false).optimal_makespan == 13);
}

TEST_CASE("independent decoder agrees on the step-major example") {
  const auto inst = testing::example3x3();
  OperationSequence seq;
  for (int s = 0; s < 3; ++s) {
    for (int j = 0; j < 3; ++j) seq.order.push_back({j, s});
  }
  CHECK(independent_decode(inst, seq) == 14);
}

TEST_CASE("independent decoder rejects invalid sequences") {
  const auto inst = testing::example3x3();
  CHECK_THROWS_AS(independent_decode(inst, {{{0, 0}}}), std::invalid_argument);
  OperationSequence seq;
  for (int s = 2; s >= 0; --s) {
    for (int j = 0; j < 3; ++j) seq.order.push_back({j, s});
  }
  CHECK_THROWS_AS(independent_decode(inst, seq), std::invalid_argument);
  seq.order.clear();
  for (int k = 0; k < 9; ++k) seq.order.push_back({0, 0});
  CHECK_THROWS_AS(independent_decode(inst, seq), std::invalid_argument);
}

TEST_CASE("oracle refuses instances above the operation limit") {
  std::mt19937_64 gen(1);
  const auto inst = testing::random_instance(gen, 4, 4);
  CHECK_THROWS_AS(exhaustive_optimum(inst), OracleSizeError);
  CHECK_NOTHROW(exhaustive_optimum(testing::random_instance(gen, 2, 3), 6));
}

TEST_CASE("independent decoder matches build_schedule on fuzzed sequences") {
  std::mt19937_64 gen(606);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto inst = testing::random_tiny_instance(gen, 12);
    const auto seq = testing::random_sequence(gen, inst);
    REQUIRE(independent_decode(inst, seq) == build_schedule(inst, seq).makespan);
  }
}

TEST_CASE("pruning never changes the optimum and the witness is consistent") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::random_tiny_instance(gen, 9);
    const auto pruned = exhaustive_optimum(inst, 12, true);
    const auto full = exhaustive_optimum(inst, 12, false);
    CHECK(pruned.optimal_makespan == full.optimal_makespan);
    CHECK(pruned.nodes_explored <= full.nodes_explored);
    CHECK(pruned.optimal_makespan >= inst.trivial_lower_bound());
    CHECK(independent_decode(inst, pruned.optimal_sequence) == pruned.optimal_makespan);
    // no random sequence beats the oracle
    for (int s = 0; s < 20; ++s) CHECK(build_schedule(inst, testing::random_sequence(gen, inst)).makespan >= full.optimal_makespan);
  }
}
