#pragma once

#include <functional>
#include <vector>

#include "banditlab/types.hpp"
#include "banditlab/zoo.hpp"

namespace banditlab {

// Explicit finite law of the reward tensor R over `horizon` timesteps:
// a list of (tensor, probability) outcomes. Row t of a tensor holds the
// rewards earned by acting at decision step t.
struct FiniteBanditSpec {
  int horizon = 0;
  int numActions = 0;
  struct Outcome {
    Eigen::MatrixXd tensor;
    double prob;
  };
  std::vector<Outcome> outcomes;

  void validate(double tol = 1e-9) const;

  // Merges outcomes with identical tensors and drops zero-probability ones.
  FiniteBanditSpec normalized() const;

  // Marginalizes away rows >= newHorizon.
  FiniteBanditSpec truncated(int newHorizon) const;

  // E[row t] as a vector over actions.
  Eigen::VectorXd marginalMean(int t) const;
};

// Deterministic per-timestep transform of a reward row. `map` must be a pure
// function of (row, t); identity() returns the row itself. `truncation` caps
// how far into the future alpha sequences extend (W in reports); -1 means
// "use the horizon".
struct AlphaSpec {
  std::function<std::vector<double>(const Eigen::VectorXd& row, int t)> map;
  int truncation = -1;

  static AlphaSpec identity(int truncation = -1);
  int effectiveTruncation(int horizon) const;
};

// Exact joint law of the reward tensor. For modulated specs the per-action
// law is computed by a transfer-matrix recursion over the latent chain, and
// the product across independent actions is assembled afterwards.
// Throws BudgetError when the outcome count would exceed budget.maxOutcomes.
FiniteBanditSpec exactLaw(const ModulatedBernoulliSpec& spec, int horizon,
                          const Budget& budget = {});
FiniteBanditSpec exactLaw(const IidBernoulliSpec& spec, int horizon, const Budget& budget = {});
FiniteBanditSpec exactLaw(const NoiseCouplingSpec& spec, int horizon, const Budget& budget = {});

// Per-action law of a reward path (r_1, ..., r_T) in {0,1}^T under the
// modulated chain for one action, as a vector indexed by the path bitmask
// (bit t set iff r_{t+1} = 1).
Eigen::VectorXd perActionPathLaw(const FiniteDist& initial, const FiniteDist& prior, double q,
                                 int horizon);

// Transition matrix of the redraw chain: M(i, j) = (1-q) 1{i=j} + q p_j.
Eigen::MatrixXd redrawTransition(const FiniteDist& prior, double q);

}  // namespace banditlab
