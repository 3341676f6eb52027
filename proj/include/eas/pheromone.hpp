#pragma once

#include <algorithm>
#include <cassert>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "eas/instance.hpp"
#include "eas/rng.hpp"

namespace eas {

/// Trail intensities on ordered node pairs plus the per-cycle deposit accumulator.
/// Node 0 is the virtual source; operation `id` is node `id + 1`.
template <typename Scalar>
class PheromoneField {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  static constexpr Eigen::Index kSource = 0;

  PheromoneField(Eigen::Index operations, Scalar tau0)
      : trails_(Matrix::Constant(operations + 1, operations + 1, tau0)),
        deposits_(Matrix::Zero(operations + 1, operations + 1)) {
    assert(tau0 > Scalar(0));
  }

  static constexpr Eigen::Index node_of(int op_id) noexcept { return op_id + 1; }

  Eigen::Index nodes() const noexcept { return trails_.rows(); }
  Scalar trail(Eigen::Index from, Eigen::Index to) const { return trails_(from, to); }
  const Matrix& trails() const noexcept { return trails_; }
  const Matrix& deposits() const noexcept { return deposits_; }

  void deposit(Eigen::Index from, Eigen::Index to, Scalar amount) { deposits_(from, to) += amount; }

  /// trail <- rho * trail + deposit, then the accumulator is cleared. Trails are floored at
  /// the smallest normal value so long runs never reach an all-zero candidate row.
  void evaporate_and_deposit(Scalar rho) {
    trails_ = (rho * trails_ + deposits_).cwiseMax(std::numeric_limits<Scalar>::min());
    deposits_.setZero();
  }

 private:
  Matrix trails_;
  Matrix deposits_;
};

/// An ant's path: operation nodes in visiting order (the source is implicit) and its makespan.
struct Tour {
  std::vector<Eigen::Index> nodes;
  Time makespan = 0;
};

/// tau^alpha * eta^(1 - alpha), normalized over the given candidate nodes only.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> transition_probabilities(
    const PheromoneField<Scalar>& field, Eigen::Index from, std::span<const Eigen::Index> to,
    const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& eta, Scalar alpha) {
  assert(!to.empty() && static_cast<Eigen::Index>(to.size()) == eta.size());
  const Scalar beta = Scalar(1) - alpha;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) weights[i] = field.trail(from, to[i]);
  weights = weights.array().pow(alpha) * eta.array().pow(beta);
  return weights / weights.sum();
}

/// Roulette wheel with an externally supplied u in [0, 1). The last index absorbs any
/// shortfall of the cumulative sum caused by rounding.
template <typename Derived>
Eigen::Index select_by_threshold(const Eigen::DenseBase<Derived>& probabilities, double u) {
  double cumulative = 0.0;
  const Eigen::Index last = probabilities.size() - 1;
  for (Eigen::Index i = 0; i < last; ++i) {
    cumulative += static_cast<double>(probabilities[i]);
    if (u < cumulative) return i;
  }
  return last;
}

/// Roulette wheel draw; consumes exactly one value from the stream.
template <typename Derived>
Eigen::Index select_next(const Eigen::DenseBase<Derived>& probabilities, Rng& rng) {
  return select_by_threshold(probabilities, rng.uniform());
}

/// Adds Q / L_k on every edge of each tour (source -> first node, then consecutive nodes).
///
/// Without `elite`, the cycle-best tour (earliest on ties) receives e * Q / L_best in place
/// of its ordinary deposit. With `elite`, every tour deposits normally and `elite` receives
/// an extra e * Q / L_elite. Returns the index of the cycle-best tour.
template <typename Scalar>
std::size_t accumulate_deposits(PheromoneField<Scalar>& field, std::span<const Tour> tours, Scalar q,
                                Scalar elitist_weight, const Tour* elite = nullptr) {
  assert(!tours.empty());
  const auto best = static_cast<std::size_t>(
      std::min_element(tours.begin(), tours.end(),
                       [](const Tour& a, const Tour& b) { return a.makespan < b.makespan; }) -
      tours.begin());

  auto lay = [&](const Tour& tour, Scalar amount) {
    Eigen::Index from = PheromoneField<Scalar>::kSource;
    for (Eigen::Index to : tour.nodes) {
      field.deposit(from, to, amount);
      from = to;
    }
  };

  for (std::size_t k = 0; k < tours.size(); ++k) {
    const Scalar base = q / static_cast<Scalar>(tours[k].makespan);
    lay(tours[k], (elite == nullptr && k == best) ? base * elitist_weight : base);
  }
  if (elite != nullptr) lay(*elite, q / static_cast<Scalar>(elite->makespan) * elitist_weight);
  return best;
}

template <typename Scalar>
void update_pheromone(PheromoneField<Scalar>& field, Scalar rho) {
  field.evaporate_and_deposit(rho);
}

}  // namespace eas
