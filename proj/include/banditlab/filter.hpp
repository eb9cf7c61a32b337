#pragma once

#include "banditlab/bandit.hpp"
#include "banditlab/zoo.hpp"

namespace banditlab {

// Exact per-action posterior over the latent mean, kept in predictive form:
// component a is P(theta_{t+1, a} = support_i | observations through step t),
// i.e. already pushed through the redraw transition. predictedMean therefore
// needs no extra transition step. Module-wide convention.
struct BeliefState {
  std::vector<Eigen::VectorXd> perAction;

  // Belief at the empty history: the chain's initial distribution.
  static BeliefState prior(const ModulatedBernoulliSpec& spec);

  void validate(double tol = 1e-12) const;
};

// One Bayes-plus-transition update after observing the acted-on action's
// reward. The acted action's component is conditioned on the Bernoulli
// likelihood and then transitioned; every other component only transitions.
// Throws ContractViolation on a zero-likelihood observation.
BeliefState filterStep(const BeliefState& belief, ActionId action, double observedReward,
                       const ModulatedBernoulliSpec& spec);

// Updates every action's component on its own coordinate of a full reward
// row (used when conditioning on R_{1:t} rather than on observed history).
BeliefState fullRowFilterStep(const BeliefState& belief, const Eigen::VectorXd& rewardRow,
                              const ModulatedBernoulliSpec& spec);

// E[R_{t+1, a} | history] = dot(belief component, support).
double predictedMean(const BeliefState& belief, ActionId action,
                     const ModulatedBernoulliSpec& spec);

// P(R_{t+1, a} = r | history) for r in {0, 1}.
double observationProb(const BeliefState& belief, ActionId action, double reward,
                       const ModulatedBernoulliSpec& spec);

// Folds filterStep along a history.
BeliefState beliefAt(const ModulatedBernoulliSpec& spec, const History& history);

}  // namespace banditlab
