#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "banditlab/agents.hpp"
#include "banditlab/history_tree.hpp"
#include "banditlab/regret.hpp"

using namespace banditlab;

namespace {

ModulatedBernoulliSpec fairSpec(int numActions, double qbar) {
  return ModulatedBernoulliSpec::symmetric(numActions, FiniteDist::uniformOver({0.0, 1.0}), qbar);
}

ModulatedBernoulliSpec asymmetricSpec(double qbar) {
  ModulatedBernoulliSpec spec;
  spec.numActions = 2;
  spec.prior = {FiniteDist::uniformOver({0.0, 1.0}),
                FiniteDist(Eigen::Vector2d(0.2, 0.9), Eigen::Vector2d(0.5, 0.5))};
  spec.redrawProb = {qbar, qbar};
  return spec;
}

History randomHistory(RngStream& rng, int numActions, int length) {
  History h;
  for (int t = 0; t < length; ++t)
    h.push_back({static_cast<ActionId>(rng.nextU64() % numActions),
                 double(rng.nextU64() % 2)});
  return h;
}

}  // namespace

TEST_CASE("uniform policy basics") {
  const auto two = uniformPolicy(2);
  CHECK(two->actionDistribution({})[0] == doctest::Approx(0.5));
  const auto one = uniformPolicy(1);
  CHECK(one->actionDistribution({})[0] == doctest::Approx(1.0));

  const auto bandit = makeModulated(fairSpec(2, 1.0));
  int plays[2] = {0, 0};
  for (const auto& log : runBatch(*bandit, *two, 10, 1000, 5))
    for (const auto& step : log.history) ++plays[step.action];
  CHECK(std::abs(plays[0] - plays[1]) < 300);
}

TEST_CASE("policies return valid distributions at fuzzed histories") {
  const ModulatedBernoulliSpec spec = asymmetricSpec(0.5);
  const std::vector<std::shared_ptr<Policy>> policies = {
      uniformPolicy(2), filteredGreedy(spec), filteredThompson(spec), slidingWindowGreedy(2, 3)};
  RngStream rng(17);
  for (const auto& policy : policies)
    for (int trial = 0; trial < 50; ++trial) {
      const History h = randomHistory(rng, 2, static_cast<int>(rng.nextU64() % 6));
      const Eigen::VectorXd dist = policy->actionDistribution(h);
      CHECK(dist.size() == 2);
      CHECK((dist.array() >= 0).all());
      CHECK(dist.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("full redraw makes greedy play the best prior mean forever") {
  const ModulatedBernoulliSpec spec = asymmetricSpec(1.0);  // means 0.5 vs 0.55
  const auto greedy = filteredGreedy(spec);
  RngStream rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const History h = randomHistory(rng, 2, trial % 5);
    CHECK(greedy->actionDistribution(h)[1] == doctest::Approx(1.0));
  }
}

TEST_CASE("greedy breaks the symmetric tie toward action 0") {
  const auto greedy = filteredGreedy(fairSpec(2, 0.5));
  CHECK(greedy->actionDistribution({})[0] == doctest::Approx(1.0));
}

TEST_CASE("greedy follows the filter after an informative win") {
  const auto greedy = filteredGreedy(fairSpec(2, 0.5));
  // Reward 1 on action 1 lifts its predicted mean to 0.75 vs 0.5.
  CHECK(greedy->actionDistribution({{1, 1.0}})[1] == doctest::Approx(1.0));
}

TEST_CASE("thompson with point-mass beliefs is the greedy argmax") {
  ModulatedBernoulliSpec spec;
  spec.numActions = 2;
  spec.prior = {FiniteDist::pointMass(0.3), FiniteDist::pointMass(0.6)};
  spec.redrawProb = {0.5, 0.5};
  const auto thompson = filteredThompson(spec);
  CHECK(thompson->actionDistribution({})[1] == doctest::Approx(1.0));
}

TEST_CASE("thompson splits symmetric collisions evenly") {
  const auto thompson = filteredThompson(fairSpec(2, 1.0));
  const Eigen::VectorXd dist = thompson->actionDistribution({});
  // Enumerating the four draw pairs: each action wins outright with 1/4 and
  // shares the two ties, giving (1/2, 1/2).
  CHECK(dist[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dist[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("single-action thompson is degenerate") {
  const auto thompson = filteredThompson(fairSpec(1, 0.5));
  CHECK(thompson->actionDistribution({})[0] == doctest::Approx(1.0));
}

TEST_CASE("full redraw collapses backward induction to the myopic rule") {
  const ModulatedBernoulliSpec spec = asymmetricSpec(1.0);
  const int T = 4;
  const BayesOptimalResult opt = solveBayesOptimal(spec, T);
  CHECK(opt.value == doctest::Approx(double(T) * 0.55).epsilon(1e-12));
  // The optimal plan is the constant best-mean action.
  const FiniteBanditSpec law = exactLaw(spec, T);
  const double value = exactExpectedTotalReward(law, *constantPolicy(1, 2));
  CHECK(value == doctest::Approx(opt.value).epsilon(1e-12));
}

TEST_CASE("horizon one is myopic: optimal equals greedy's first action") {
  const ModulatedBernoulliSpec spec = asymmetricSpec(0.5);
  const BayesOptimalResult opt = solveBayesOptimal(spec, 1);
  const auto greedy = filteredGreedy(spec);
  const Eigen::VectorXd optDist = opt.policy->actionDistribution({});
  const Eigen::VectorXd greedyDist = greedy->actionDistribution({});
  CHECK(optDist == greedyDist);
}

TEST_CASE("frozen chain: optimal value dominates the greedy value") {
  const ModulatedBernoulliSpec spec = fairSpec(2, 0.0);
  const int T = 3;
  const FiniteBanditSpec law = exactLaw(spec, T);
  const BayesOptimalResult opt = solveBayesOptimal(law);
  const double greedyValue = exactExpectedTotalReward(law, *filteredGreedy(spec));
  CHECK(opt.value >= greedyValue - 1e-12);
}

TEST_CASE("optimality certificate: no implemented policy beats the solver") {
  const ModulatedBernoulliSpec spec = asymmetricSpec(0.5);
  const int T = 4;
  const FiniteBanditSpec law = exactLaw(spec, T);
  const BayesOptimalResult opt = solveBayesOptimal(law);
  const std::vector<std::shared_ptr<Policy>> rivals = {
      uniformPolicy(2), constantPolicy(0, 2), constantPolicy(1, 2), filteredGreedy(spec),
      filteredThompson(spec)};
  for (const auto& rival : rivals)
    CHECK(opt.value >= exactExpectedTotalReward(law, *rival) - 1e-12);
  CHECK(opt.value == doctest::Approx(exactExpectedTotalReward(law, *opt.policy)).epsilon(1e-12));
}

TEST_CASE("greedy and thompson coincide on point-mass beliefs") {
  ModulatedBernoulliSpec spec;
  spec.numActions = 2;
  spec.prior = {FiniteDist::pointMass(0.2), FiniteDist::pointMass(0.7)};
  spec.redrawProb = {0.3, 0.3};
  const auto greedy = filteredGreedy(spec);
  const auto thompson = filteredThompson(spec);
  RngStream rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const History h = randomHistory(rng, 2, trial % 4);
    CHECK(greedy->actionDistribution(h) == thompson->actionDistribution(h));
  }
}

TEST_CASE("dynamic oracle picks the latent argmax with low-index ties") {
  const auto oracle = dynamicOracle(2);
  CHECK(oracle->actionDistributionGivenLatent({}, Eigen::Vector2d(0.2, 0.9))[1] ==
        doctest::Approx(1.0));
  CHECK(oracle->actionDistributionGivenLatent({}, Eigen::Vector2d(0.4, 0.4))[0] ==
        doctest::Approx(1.0));
}

TEST_CASE("dynamic oracle has zero dynamic regret, exactly") {
  for (double qbar : {0.0, 0.5, 1.0}) {
    const ModulatedBernoulliSpec spec = asymmetricSpec(qbar);
    const RegretReport report =
        regretExact(spec, *dynamicOracle(2), 3, OracleProcessKind::DynamicTheta);
    for (int t = 0; t < 3; ++t) CHECK(report.perStep[t] == doctest::Approx(0.0).epsilon(1e-12));
  }
}
