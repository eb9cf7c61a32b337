#pragma once

#include <memory>

#include "banditlab/filter.hpp"
#include "banditlab/finite_law.hpp"
#include "banditlab/joint.hpp"

namespace banditlab {

// All reachable observed histories up to the horizon under (spec, policy),
// annotated with exact reach probabilities, the policy's action distribution
// and the filter belief at each node. Nodes are stored depth by depth; node 0
// is the empty-history root.
struct HistoryTree {
  struct Node {
    History history;
    double prob;                  // P(H_t = history)
    Eigen::VectorXd actionDist;   // policy at this node
    BeliefState belief;           // predictive belief after this history
    std::vector<int> children;
    int depth;
  };

  ModulatedBernoulliSpec spec;
  int horizon = 0;
  std::vector<Node> nodes;

  std::vector<int> leafIndices() const;
};

HistoryTree buildHistoryTree(const ModulatedBernoulliSpec& spec, const Policy& policy, int horizon,
                             const Budget& budget = {});

// Exact joint of (reward tensor, action path) under (law, policy): atom
// probability is P(tensor) times the policy factors along the realized
// history. Zero-probability action branches are pruned.
struct InteractionJoint {
  FiniteBanditSpec law;
  int horizon = 0;
  struct Atom {
    int outcome;
    std::vector<ActionId> actions;
    double prob;
  };
  std::vector<Atom> atoms;

  double observedReward(const Atom& atom, int t) const {
    return law.outcomes[atom.outcome].tensor(t, atom.actions[t]);
  }
};

InteractionJoint buildInteractionJoint(const FiniteBanditSpec& law, const Policy& policy,
                                       const Budget& budget = {});

// Variable selection for jointOf: actions, observed rewards, single reward
// cells, history prefixes, and per-timestep alpha transforms. Timesteps are
// 0-based decision-step indices; RewardCell{t, a} is the reward action a
// pays at decision step t.
struct VarSpec {
  enum class Kind { Action, ObservedReward, RewardCell, HistoryPrefix, Alpha };
  Kind kind;
  int t = 0;
  ActionId a = 0;

  static VarSpec action(int t) { return {Kind::Action, t, 0}; }
  static VarSpec observedReward(int t) { return {Kind::ObservedReward, t, 0}; }
  static VarSpec rewardCell(int t, ActionId a) { return {Kind::RewardCell, t, a}; }
  static VarSpec historyPrefix(int t) { return {Kind::HistoryPrefix, t, 0}; }
  static VarSpec alpha(int t) { return {Kind::Alpha, t, 0}; }
};

JointDist jointOf(const InteractionJoint& joint, const std::vector<VarSpec>& query,
                  const AlphaSpec& alpha = AlphaSpec::identity());

// Convenience form matching the history-tree surface: enumerates the exact
// law for the tree's spec and combines it with the tree's policy.
JointDist jointOf(const HistoryTree& tree, const Policy& policy, const std::vector<VarSpec>& query,
                  const AlphaSpec& alpha = AlphaSpec::identity(), const Budget& budget = {});

}  // namespace banditlab
