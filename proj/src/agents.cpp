#include "banditlab/agents.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "banditlab/history_tree.hpp"

namespace banditlab {

namespace {

Eigen::VectorXd oneHot(ActionId a, int n) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[a] = 1.0;
  return v;
}

ActionId argmaxLowest(const Eigen::VectorXd& values) {
  ActionId best = 0;
  for (int a = 1; a < values.size(); ++a)
    if (values[a] > values[best]) best = a;
  return best;
}

class UniformPolicy final : public Policy {
 public:
  explicit UniformPolicy(int n) : n_(n) {}
  int numActions() const override { return n_; }
  Eigen::VectorXd actionDistribution(const History&) const override {
    return Eigen::VectorXd::Constant(n_, 1.0 / double(n_));
  }

 private:
  int n_;
};

class ConstantPolicy final : public Policy {
 public:
  ConstantPolicy(ActionId a, int n) : a_(a), n_(n) {}
  int numActions() const override { return n_; }
  Eigen::VectorXd actionDistribution(const History&) const override { return oneHot(a_, n_); }

 private:
  ActionId a_;
  int n_;
};

class FilteredGreedyPolicy final : public Policy {
 public:
  explicit FilteredGreedyPolicy(ModulatedBernoulliSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
  }
  int numActions() const override { return spec_.numActions; }
  Eigen::VectorXd actionDistribution(const History& history) const override {
    const BeliefState belief = beliefAt(spec_, history);
    Eigen::VectorXd means(spec_.numActions);
    for (ActionId a = 0; a < spec_.numActions; ++a) means[a] = predictedMean(belief, a, spec_);
    return oneHot(argmaxLowest(means), spec_.numActions);
  }

 private:
  ModulatedBernoulliSpec spec_;
};

class FilteredThompsonPolicy final : public Policy {
 public:
  explicit FilteredThompsonPolicy(ModulatedBernoulliSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
  }
  int numActions() const override { return spec_.numActions; }

  // Exact law of "draw theta-hat_a from each belief, play the argmax":
  // enumerate the product of belief supports; ties split evenly among the
  // maximizers, so each tied action wins its share.
  Eigen::VectorXd actionDistribution(const History& history) const override {
    const BeliefState belief = beliefAt(spec_, history);
    const int A = spec_.numActions;
    Eigen::VectorXd dist = Eigen::VectorXd::Zero(A);
    std::vector<int> idx(A, 0);
    while (true) {
      double p = 1.0;
      for (int a = 0; a < A; ++a) p *= belief.perAction[a][idx[a]];
      if (p > 0.0) {
        double best = -1.0;
        for (int a = 0; a < A; ++a) best = std::max(best, spec_.prior[a].support[idx[a]]);
        std::vector<ActionId> winners;
        for (int a = 0; a < A; ++a)
          if (spec_.prior[a].support[idx[a]] == best) winners.push_back(a);
        for (ActionId w : winners) dist[w] += p / double(winners.size());
      }
      int a = 0;
      while (a < A && ++idx[a] == belief.perAction[a].size()) idx[a++] = 0;
      if (a == A) break;
    }
    return dist;
  }

 private:
  ModulatedBernoulliSpec spec_;
};

class DynamicOraclePolicy final : public Policy {
 public:
  explicit DynamicOraclePolicy(int n) : n_(n) {}
  int numActions() const override { return n_; }
  bool readsLatents() const override { return true; }
  Eigen::VectorXd actionDistribution(const History&) const override {
    throw ContractViolation("dynamicOracle requires the latent mean-reward row");
  }
  Eigen::VectorXd actionDistributionGivenLatent(const History&,
                                                const Eigen::VectorXd& latentRow) const override {
    return oneHot(argmaxLowest(latentRow), n_);
  }

 private:
  int n_;
};

class SlidingWindowGreedyPolicy final : public Policy {
 public:
  SlidingWindowGreedyPolicy(int n, int window) : n_(n), window_(window) {
    if (window < 1) throw SpecError("slidingWindowGreedy: window must be >= 1");
  }
  int numActions() const override { return n_; }
  Eigen::VectorXd actionDistribution(const History& history) const override {
    std::vector<std::deque<double>> recent(n_);
    for (const auto& step : history) {
      recent[step.action].push_back(step.reward);
      if (static_cast<int>(recent[step.action].size()) > window_) recent[step.action].pop_front();
    }
    Eigen::VectorXd means(n_);
    for (int a = 0; a < n_; ++a) {
      if (recent[a].empty()) return oneHot(a, n_);  // unexplored actions first
      double sum = 0.0;
      for (double r : recent[a]) sum += r;
      means[a] = sum / double(recent[a].size());
    }
    return oneHot(argmaxLowest(means), n_);
  }

 private:
  int n_;
  int window_;
};

}  // namespace

std::shared_ptr<Policy> uniformPolicy(int numActions) {
  return std::make_shared<UniformPolicy>(numActions);
}
std::shared_ptr<Policy> constantPolicy(ActionId action, int numActions) {
  return std::make_shared<ConstantPolicy>(action, numActions);
}
std::shared_ptr<Policy> filteredGreedy(const ModulatedBernoulliSpec& spec) {
  return std::make_shared<FilteredGreedyPolicy>(spec);
}
std::shared_ptr<Policy> filteredThompson(const ModulatedBernoulliSpec& spec) {
  return std::make_shared<FilteredThompsonPolicy>(spec);
}
std::shared_ptr<Policy> dynamicOracle(int numActions) {
  return std::make_shared<DynamicOraclePolicy>(numActions);
}
std::shared_ptr<Policy> slidingWindowGreedy(int numActions, int window) {
  return std::make_shared<SlidingWindowGreedyPolicy>(numActions, window);
}

Eigen::VectorXd TabularPolicy::actionDistribution(const History& history) const {
  auto it = plan_.find(historyKey(history));
  if (it == plan_.end()) return Eigen::VectorXd::Constant(numActions_, 1.0 / double(numActions_));
  return oneHot(it->second, numActions_);
}

std::vector<double> TabularPolicy::historyKey(const History& history) {
  std::vector<double> key;
  key.reserve(history.size() * 2);
  for (const auto& step : history) {
    key.push_back(double(step.action));
    key.push_back(step.reward);
  }
  return key;
}

namespace {

struct BackwardInduction {
  const FiniteBanditSpec& law;
  const Budget& budget;
  std::map<std::vector<double>, ActionId> plan;
  std::int64_t nodeCount = 0;

  // `consistent` holds (outcome index, probability mass) for outcomes that
  // agree with the observed prefix. Returns the optimal expected remaining
  // reward from step t.
  double solve(std::vector<std::pair<int, double>>& consistent, std::vector<double>& key, int t) {
    if (t == law.horizon) return 0.0;
    if (++nodeCount > budget.maxTreeNodes)
      throw BudgetError("solveBayesOptimal: history budget exceeded", nodeCount);

    double total = 0.0;
    for (const auto& [o, p] : consistent) total += p;

    double bestValue = -std::numeric_limits<double>::infinity();
    ActionId bestAction = 0;
    for (ActionId a = 0; a < law.numActions; ++a) {
      // Partition by the observed reward value for action a at step t.
      std::map<double, std::vector<std::pair<int, double>>> byReward;
      for (const auto& [o, p] : consistent) byReward[law.outcomes[o].tensor(t, a)].emplace_back(o, p);
      double value = 0.0;
      for (auto& [r, group] : byReward) {
        double mass = 0.0;
        for (const auto& [o, p] : group) mass += p;
        key.push_back(double(a));
        key.push_back(r);
        value += (mass / total) * (r + solve(group, key, t + 1));
        key.pop_back();
        key.pop_back();
      }
      if (value > bestValue) {
        bestValue = value;
        bestAction = a;
      }
    }
    plan[key] = bestAction;
    return bestValue;
  }
};

}  // namespace

BayesOptimalResult solveBayesOptimal(const FiniteBanditSpec& law, const Budget& budget) {
  law.validate();
  BackwardInduction solver{law, budget, {}, 0};
  std::vector<std::pair<int, double>> all;
  for (int o = 0; o < static_cast<int>(law.outcomes.size()); ++o)
    if (law.outcomes[o].prob > 0.0) all.emplace_back(o, law.outcomes[o].prob);
  std::vector<double> key;
  const double value = solver.solve(all, key, 0);
  BayesOptimalResult result;
  result.policy = std::make_shared<TabularPolicy>(law.numActions, std::move(solver.plan));
  result.value = value;
  return result;
}

BayesOptimalResult solveBayesOptimal(const ModulatedBernoulliSpec& spec, int horizon,
                                     const Budget& budget) {
  return solveBayesOptimal(exactLaw(spec, horizon, budget), budget);
}

double exactExpectedTotalReward(const FiniteBanditSpec& law, const Policy& policy,
                                const Budget& budget) {
  const InteractionJoint joint = buildInteractionJoint(law, policy, budget);
  double total = 0.0;
  for (const auto& atom : joint.atoms)
    for (int t = 0; t < joint.horizon; ++t) total += atom.prob * joint.observedReward(atom, t);
  return total;
}

}  // namespace banditlab
