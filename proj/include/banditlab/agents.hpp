#pragma once

#include <map>
#include <memory>

#include "banditlab/filter.hpp"
#include "banditlab/finite_law.hpp"

namespace banditlab {

// Uniform action distribution at every history.
std::shared_ptr<Policy> uniformPolicy(int numActions);

// Always plays the given action.
std::shared_ptr<Policy> constantPolicy(ActionId action, int numActions);

// Plays argmax_a of the exact filter's predicted mean, ties to the lowest
// action index.
std::shared_ptr<Policy> filteredGreedy(const ModulatedBernoulliSpec& spec);

// Samples a mean from each action's exact belief and plays the argmax; the
// returned distribution is the exact law of that draw, with argmax ties
// split evenly among the tied actions.
std::shared_ptr<Policy> filteredThompson(const ModulatedBernoulliSpec& spec);

// Benchmark oracle that reads the latent mean-reward row for the step it
// acts on and plays its argmax (ties to the lowest index). Not an agent:
// it exists to realize the dynamic-regret benchmark.
std::shared_ptr<Policy> dynamicOracle(int numActions);

// Greedy on empirical means over the last `window` pulls of each action;
// unexplored actions first. Baseline only.
std::shared_ptr<Policy> slidingWindowGreedy(int numActions, int window);

// Deterministic policy stored as a map from every reachable observed history
// to an action. Histories outside the plan fall back to the uniform
// distribution.
class TabularPolicy : public Policy {
 public:
  TabularPolicy(int numActions, std::map<std::vector<double>, ActionId> plan)
      : numActions_(numActions), plan_(std::move(plan)) {}

  int numActions() const override { return numActions_; }
  Eigen::VectorXd actionDistribution(const History& history) const override;

  static std::vector<double> historyKey(const History& history);
  const std::map<std::vector<double>, ActionId>& plan() const { return plan_; }

 private:
  int numActions_;
  std::map<std::vector<double>, ActionId> plan_;
};

struct BayesOptimalResult {
  std::shared_ptr<TabularPolicy> policy;
  double value = 0.0;  // optimal E[sum of earned rewards]
};

// Finite-horizon Bayes-optimal policy for total expected reward, by backward
// induction over the exact history tree of the law (conditioning on observed
// (action, reward) prefixes). Ties break to the lowest action index.
BayesOptimalResult solveBayesOptimal(const FiniteBanditSpec& law, const Budget& budget = {});
BayesOptimalResult solveBayesOptimal(const ModulatedBernoulliSpec& spec, int horizon,
                                     const Budget& budget = {});

// Exact E[sum of earned rewards] of a history policy under the law.
double exactExpectedTotalReward(const FiniteBanditSpec& law, const Policy& policy,
                                const Budget& budget = {});

}  // namespace banditlab
