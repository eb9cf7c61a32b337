#include "banditlab/history_tree.hpp"

#include <cmath>

namespace banditlab {

std::vector<int> HistoryTree::leafIndices() const {
  std::vector<int> leaves;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (nodes[i].depth == horizon) leaves.push_back(i);
  return leaves;
}

HistoryTree buildHistoryTree(const ModulatedBernoulliSpec& spec, const Policy& policy, int horizon,
                             const Budget& budget) {
  spec.validate();
  if (horizon < 1) throw SpecError("buildHistoryTree: horizon must be >= 1");
  if (policy.readsLatents())
    throw SpecError("buildHistoryTree: latent-reading oracles have no history tree");

  HistoryTree tree;
  tree.spec = spec;
  tree.horizon = horizon;

  HistoryTree::Node root;
  root.history = {};
  root.prob = 1.0;
  root.actionDist = policy.actionDistribution(root.history);
  checkActionDistribution(root.actionDist, spec.numActions, 0);
  root.belief = BeliefState::prior(spec);
  root.depth = 0;
  tree.nodes.push_back(std::move(root));

  std::vector<int> frontier = {0};
  for (int depth = 0; depth < horizon; ++depth) {
    std::vector<int> next;
    for (int idx : frontier) {
      for (ActionId a = 0; a < spec.numActions; ++a) {
        const double pa = tree.nodes[idx].actionDist[a];
        if (pa <= 0.0) continue;
        for (double r : {0.0, 1.0}) {
          const double pr = observationProb(tree.nodes[idx].belief, a, r, spec);
          if (pr <= 0.0) continue;
          if (static_cast<std::int64_t>(tree.nodes.size()) >= budget.maxTreeNodes)
            throw BudgetError("buildHistoryTree: node budget exceeded",
                              static_cast<std::int64_t>(tree.nodes.size()) + 1);
          HistoryTree::Node node;
          node.history = tree.nodes[idx].history;
          node.history.push_back({a, r});
          node.prob = tree.nodes[idx].prob * pa * pr;
          node.belief = filterStep(tree.nodes[idx].belief, a, r, spec);
          node.depth = depth + 1;
          if (depth + 1 < horizon) {
            node.actionDist = policy.actionDistribution(node.history);
            checkActionDistribution(node.actionDist, spec.numActions, depth + 1);
          }
          tree.nodes.push_back(std::move(node));
          const int childIdx = static_cast<int>(tree.nodes.size()) - 1;
          tree.nodes[idx].children.push_back(childIdx);
          next.push_back(childIdx);
        }
      }
    }
    frontier = std::move(next);
  }
  return tree;
}

InteractionJoint buildInteractionJoint(const FiniteBanditSpec& law, const Policy& policy,
                                       const Budget& budget) {
  law.validate();
  if (policy.readsLatents())
    throw SpecError("buildInteractionJoint: latent-reading oracles are not history policies");

  InteractionJoint joint;
  joint.law = law;
  joint.horizon = law.horizon;

  // Policy factors depend on the observed history only, so action
  // distributions are shared across outcomes with the same observation
  // prefix; memoize on the history key.
  std::map<std::vector<double>, Eigen::VectorXd> policyCache;
  auto distAt = [&](const History& h) -> const Eigen::VectorXd& {
    std::vector<double> key;
    key.reserve(h.size() * 2);
    for (const auto& s : h) {
      key.push_back(double(s.action));
      key.push_back(s.reward);
    }
    auto it = policyCache.find(key);
    if (it == policyCache.end()) {
      Eigen::VectorXd d = policy.actionDistribution(h);
      checkActionDistribution(d, law.numActions, static_cast<int>(h.size()));
      it = policyCache.emplace(std::move(key), std::move(d)).first;
    }
    return it->second;
  };

  for (int o = 0; o < static_cast<int>(law.outcomes.size()); ++o) {
    const auto& outcome = law.outcomes[o];
    if (outcome.prob <= 0.0) continue;

    struct Frame {
      History history;
      std::vector<ActionId> actions;
      double prob;
      int t;
    };
    std::vector<Frame> stack;
    stack.push_back({{}, {}, outcome.prob, 0});
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      if (f.t == law.horizon) {
        if (static_cast<std::int64_t>(joint.atoms.size()) >= budget.maxAtoms)
          throw BudgetError("buildInteractionJoint: atom budget exceeded",
                            static_cast<std::int64_t>(joint.atoms.size()) + 1);
        joint.atoms.push_back({o, std::move(f.actions), f.prob});
        continue;
      }
      const Eigen::VectorXd& dist = distAt(f.history);
      for (ActionId a = law.numActions - 1; a >= 0; --a) {
        if (dist[a] <= 0.0) continue;
        Frame g = f;
        g.prob *= dist[a];
        g.actions.push_back(a);
        g.history.push_back({a, outcome.tensor(f.t, a)});
        g.t += 1;
        stack.push_back(std::move(g));
      }
    }
  }
  return joint;
}

namespace {

std::vector<double> alphaValue(const AlphaSpec& alpha, const Eigen::MatrixXd& tensor, int t) {
  return alpha.map(tensor.row(t).transpose(), t);
}

}  // namespace

JointDist jointOf(const InteractionJoint& joint, const std::vector<VarSpec>& query,
                  const AlphaSpec& alpha) {
  std::vector<std::string> names;
  for (const auto& v : query) {
    switch (v.kind) {
      case VarSpec::Kind::Action:
        if (v.t < 0 || v.t >= joint.horizon) throw SpecError("jointOf: action timestep out of range");
        names.push_back("A_" + std::to_string(v.t));
        break;
      case VarSpec::Kind::ObservedReward:
        if (v.t < 0 || v.t >= joint.horizon) throw SpecError("jointOf: reward timestep out of range");
        names.push_back("Robs_" + std::to_string(v.t));
        break;
      case VarSpec::Kind::RewardCell:
        if (v.t < 0 || v.t >= joint.horizon || v.a < 0 || v.a >= joint.law.numActions)
          throw SpecError("jointOf: reward cell out of range");
        names.push_back("R_" + std::to_string(v.t) + "_" + std::to_string(v.a));
        break;
      case VarSpec::Kind::HistoryPrefix:
        if (v.t < 0 || v.t > joint.horizon) throw SpecError("jointOf: history prefix out of range");
        names.push_back("H_" + std::to_string(v.t));
        break;
      case VarSpec::Kind::Alpha:
        if (v.t < 0 || v.t >= joint.horizon) throw SpecError("jointOf: alpha timestep out of range");
        names.push_back("alpha_" + std::to_string(v.t));
        break;
    }
  }

  JointDist out(names);
  Codebook<std::vector<double>> values;
  for (const auto& atom : joint.atoms) {
    const auto& tensor = joint.law.outcomes[atom.outcome].tensor;
    std::vector<int> key;
    key.reserve(query.size());
    for (const auto& v : query) {
      switch (v.kind) {
        case VarSpec::Kind::Action:
          key.push_back(atom.actions[v.t]);
          break;
        case VarSpec::Kind::ObservedReward:
          key.push_back(values.code({joint.observedReward(atom, v.t)}));
          break;
        case VarSpec::Kind::RewardCell:
          key.push_back(values.code({tensor(v.t, v.a)}));
          break;
        case VarSpec::Kind::HistoryPrefix: {
          std::vector<double> h;
          h.reserve(v.t * 2);
          for (int s = 0; s < v.t; ++s) {
            h.push_back(double(atom.actions[s]));
            h.push_back(joint.observedReward(atom, s));
          }
          key.push_back(values.code(h));
          break;
        }
        case VarSpec::Kind::Alpha:
          key.push_back(values.code(alphaValue(alpha, tensor, v.t)));
          break;
      }
    }
    out.add(std::move(key), atom.prob);
  }
  return out;
}

JointDist jointOf(const HistoryTree& tree, const Policy& policy, const std::vector<VarSpec>& query,
                  const AlphaSpec& alpha, const Budget& budget) {
  const FiniteBanditSpec law = exactLaw(tree.spec, tree.horizon, budget);
  return jointOf(buildInteractionJoint(law, policy, budget), query, alpha);
}

}  // namespace banditlab
