#include "banditlab/filter.hpp"

#include <cmath>

#include "banditlab/finite_law.hpp"

namespace banditlab {

BeliefState BeliefState::prior(const ModulatedBernoulliSpec& spec) {
  BeliefState b;
  b.perAction.reserve(spec.numActions);
  for (ActionId a = 0; a < spec.numActions; ++a) b.perAction.push_back(spec.initialDist(a).probs);
  return b;
}

void BeliefState::validate(double tol) const {
  for (const auto& v : perAction) {
    if ((v.array() < -tol).any()) throw SpecError("BeliefState: negative mass");
    if (std::abs(v.sum() - 1.0) > tol)
      throw SpecError("BeliefState: component sums to " + std::to_string(v.sum()));
  }
}

namespace {

Eigen::VectorXd bayesOnBernoulli(const Eigen::VectorXd& belief, const FiniteDist& prior,
                                 double reward, ActionId action) {
  Eigen::VectorXd post(belief.size());
  for (int i = 0; i < belief.size(); ++i) {
    const double lik = reward != 0.0 ? prior.support[i] : 1.0 - prior.support[i];
    post[i] = belief[i] * lik;
  }
  const double mass = post.sum();
  if (mass <= 0.0)
    throw ContractViolation("filter: zero-likelihood observation " + std::to_string(reward) +
                            " on action " + std::to_string(action));
  return post / mass;
}

}  // namespace

BeliefState filterStep(const BeliefState& belief, ActionId action, double observedReward,
                       const ModulatedBernoulliSpec& spec) {
  if (action < 0 || action >= spec.numActions) throw SpecError("filterStep: action out of range");
  if (observedReward != 0.0 && observedReward != 1.0)
    throw ContractViolation("filterStep: reward outside the Bernoulli alphabet");

  BeliefState next;
  next.perAction.reserve(spec.numActions);
  for (ActionId a = 0; a < spec.numActions; ++a) {
    Eigen::VectorXd b = belief.perAction[a];
    if (a == action) b = bayesOnBernoulli(b, spec.prior[a], observedReward, a);
    // Transition b -> (1-q) b + q Q along the redraw chain.
    next.perAction.push_back(redrawTransition(spec.prior[a], spec.redrawProb[a]).transpose() * b);
  }
  return next;
}

BeliefState fullRowFilterStep(const BeliefState& belief, const Eigen::VectorXd& rewardRow,
                              const ModulatedBernoulliSpec& spec) {
  BeliefState next;
  next.perAction.reserve(spec.numActions);
  for (ActionId a = 0; a < spec.numActions; ++a) {
    Eigen::VectorXd b = bayesOnBernoulli(belief.perAction[a], spec.prior[a], rewardRow[a], a);
    next.perAction.push_back(redrawTransition(spec.prior[a], spec.redrawProb[a]).transpose() * b);
  }
  return next;
}

double predictedMean(const BeliefState& belief, ActionId action,
                     const ModulatedBernoulliSpec& spec) {
  return belief.perAction[action].dot(spec.prior[action].support);
}

double observationProb(const BeliefState& belief, ActionId action, double reward,
                       const ModulatedBernoulliSpec& spec) {
  const double mean = predictedMean(belief, action, spec);
  return reward != 0.0 ? mean : 1.0 - mean;
}

BeliefState beliefAt(const ModulatedBernoulliSpec& spec, const History& history) {
  BeliefState b = BeliefState::prior(spec);
  for (const auto& step : history) b = filterStep(b, step.action, step.reward, spec);
  return b;
}

}  // namespace banditlab
