#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "banditlab/agents.hpp"
#include "banditlab/info.hpp"
#include "oracles.hpp"

using namespace banditlab;

namespace {

constexpr double kLn2 = 0.6931471805599453;

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

JointDist randomJoint(RngStream& rng, int vars, int levels) {
  std::vector<std::string> names;
  for (int v = 0; v < vars; ++v) names.push_back("x" + std::to_string(v));
  JointDist joint(names);
  std::vector<int> key(vars, 0);
  std::vector<std::pair<std::vector<int>, double>> cells;
  double mass = 0.0;
  while (true) {
    const double w = rng.nextDouble();
    cells.emplace_back(key, w);
    mass += w;
    int v = 0;
    while (v < vars && ++key[v] == levels) key[v++] = 0;
    if (v == vars) break;
  }
  for (auto& [k, w] : cells) joint.add(k, w / mass);
  return joint;
}

}  // namespace

TEST_CASE("entropy basics in nats") {
  CHECK(entropy(FiniteDist::uniformOver({0.0, 1.0})) == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(entropy(FiniteDist::pointMass(0.7)) == doctest::Approx(0.0));
  CHECK(entropy(FiniteDist::uniformOver({0.1, 0.2, 0.3, 0.4})) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("mutual information: independence and self-information") {
  JointDist indep({"x", "y"});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y) indep.add({x, y}, (x ? 0.3 : 0.7) * (1.0 / 3.0));
  CHECK(mutualInfo(indep, {0}, {1}) == doctest::Approx(0.0).epsilon(1e-12));

  JointDist self({"x", "copy"});
  self.add({0, 0}, 0.25);
  self.add({1, 1}, 0.75);
  const double hx = -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
  CHECK(mutualInfo(self, {0}, {1}) == doctest::Approx(hx).epsilon(1e-12));
}

TEST_CASE("redraw pair-law information agrees with a simulation histogram") {
  // P(theta_1 = i, theta_2 = j) = p_i ((1-q) 1{i=j} + q p_j), p = (1/2, 1/2),
  // q = 1/2: formula value vs a histogram over sampled latent pairs.
  const ModulatedBernoulliSpec spec = fairSpec(1, 0.5);
  JointDist pairLaw({"t2", "t1"});
  const Eigen::MatrixXd M = redrawTransition(spec.prior[0], 0.5);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) pairLaw.add({j, i}, 0.5 * M(i, j));
  const double exact = mutualInfo(pairLaw, {0}, {1});

  // Independent pairs from many short episodes (one long chain would give
  // correlated draws).
  const auto bandit = makeModulated(spec);
  std::map<std::pair<int, int>, double> counts;
  const int episodes = 400000;
  for (int e = 0; e < episodes; ++e) {
    const EpisodeDraw draw = bandit->sampleEpisode(2, RngStream(99).child(e));
    counts[{int(draw.latents->coeff(0, 0)), int(draw.latents->coeff(1, 0))}] += 1.0;
  }
  JointDist hist({"t2", "t1"});
  for (const auto& [cell, c] : counts) hist.add({cell.second, cell.first}, c / episodes);
  const double sampled = mutualInfo(hist, {0}, {1});
  CHECK(std::abs(sampled - exact) < 1e-3);
}

TEST_CASE("chain rule holds on random joints") {
  RngStream rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const JointDist joint = randomJoint(rng, 3, 3);
    const double lhs = mutualInfo(joint, {0}, {1, 2});
    const double rhs = mutualInfo(joint, {0}, {1}) + mutualInfo(joint, {0}, {2}, {1});
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("negative rounding noise is clamped and recorded") {
  resetMiClampStats();
  JointDist indep({"x", "y"});
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) indep.add({x, y}, (x == 0 ? 0.2 : 0.4) * (y == 1 ? 0.5 : 0.25));
  const double info = mutualInfo(indep, {0}, {1});
  CHECK(info >= 0.0);
  const MiClampStats stats = miClampStats();
  CHECK(stats.maxMagnitude <= 1e-9);
}

TEST_CASE("data processing: coarser alpha maps never gain information") {
  const ModulatedBernoulliSpec spec = asymmetricSpec(0.5);
  const FiniteBanditSpec law = exactLaw(spec, 4);
  const PredictiveInfoReport fine = predictiveInfo(law, AlphaSpec::identity(), 4);

  RngStream rng(33);
  for (int trial = 0; trial < 8; ++trial) {
    // Random lookup table f: row pattern (2 bits) -> {0, 1}.
    std::array<int, 4> table;
    for (auto& v : table) v = static_cast<int>(rng.nextU64() % 2);
    AlphaSpec coarse;
    coarse.map = [table](const Eigen::VectorXd& row, int) {
      const int pattern = (row[0] != 0.0 ? 1 : 0) | (row[1] != 0.0 ? 2 : 0);
      return std::vector<double>{double(table[pattern])};
    };
    const PredictiveInfoReport mapped = predictiveInfo(law, coarse, 4);
    for (int t = 0; t < 4; ++t) CHECK(mapped.perStep[t] <= fine.perStep[t] + 1e-9);
  }
}

TEST_CASE("full redraw carries no predictive information") {
  const PredictiveInfoReport report = predictiveInfo(fairSpec(2, 1.0), AlphaSpec::identity(), 4);
  for (int t = 0; t < 4; ++t) CHECK(report.perStep[t] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(report.cumulative == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("frozen single-action chain: hand-computed deltas") {
  const PredictiveInfoReport report = predictiveInfo(fairSpec(1, 0.0), AlphaSpec::identity(), 3);
  CHECK(report.perStep[0] == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(report.perStep[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.perStep[2] == doctest::Approx(0.0));
  CHECK(report.cumulative == doctest::Approx(kLn2).epsilon(1e-12));
}

TEST_CASE("deltas are nondecreasing in the truncation level") {
  const ModulatedBernoulliSpec spec = asymmetricSpec(0.3);
  const FiniteBanditSpec law = exactLaw(spec, 5);
  Eigen::VectorXd previous = Eigen::VectorXd::Zero(5);
  for (int W = 1; W <= 5; ++W) {
    const PredictiveInfoReport report = predictiveInfo(law, AlphaSpec::identity(W), 5);
    for (int t = 0; t < 5; ++t) CHECK(report.perStep[t] >= previous[t] - 1e-9);
    previous = report.perStep;
  }
}

TEST_CASE("proposition 1: bound instances") {
  // q = 1: both sides vanish.
  const BoundReport atOne = prop1Bound(fairSpec(1, 1.0), 3);
  CHECK(atOne.pass);
  CHECK(atOne.lhs == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(atOne.rhs == doctest::Approx(0.0));

  // T = 4, one action, q = 0.5: rhs = 4 * 0.5 * ln 2.
  const BoundReport mid = prop1Bound(fairSpec(1, 0.5), 4);
  CHECK(mid.rhs == doctest::Approx(4.0 * 0.5 * kLn2).epsilon(1e-12));
  CHECK(mid.pass);

  // q = 0, T = 3: lhs = ln 2 from the frozen chain, rhs = 3 ln 2.
  const BoundReport frozen = prop1Bound(fairSpec(1, 0.0), 3);
  CHECK(frozen.lhs == doctest::Approx(kLn2).epsilon(1e-9));
  CHECK(frozen.rhs == doctest::Approx(3.0 * kLn2).epsilon(1e-12));
  CHECK(frozen.pass);
}

TEST_CASE("information ratio: single action has nothing to regret") {
  const InfoRatioReport report =
      infoRatio(fairSpec(1, 0.5), *uniformPolicy(1), 3, OracleProcessKind::PastRewards,
                AlphaSpec::identity());
  for (int t = 0; t < 3; ++t) {
    CHECK(report.gamma[t] == doctest::Approx(0.0));
    CHECK_FALSE(report.infiniteFlagged[t]);
  }
}

TEST_CASE("information ratio: zero-regret greedy at full redraw") {
  const ModulatedBernoulliSpec spec = asymmetricSpec(1.0);
  const InfoRatioReport report = infoRatio(spec, *filteredGreedy(spec), 3,
                                           OracleProcessKind::PastRewards, AlphaSpec::identity());
  for (int t = 0; t < 3; ++t) CHECK(report.gamma[t] == doctest::Approx(0.0));
}

TEST_CASE("information gain recomputed by brute-force enumeration") {
  const ModulatedBernoulliSpec spec = asymmetricSpec(0.5);
  const auto uniform = uniformPolicy(2);
  const int T = 3;
  const InfoRatioReport viaLibrary =
      infoRatio(spec, *uniform, T, OracleProcessKind::PastRewards, AlphaSpec::identity());

  const auto atoms = oracles::bruteForceInteraction(spec, *uniform, T);
  for (int t = 0; t < T; ++t) {
    std::vector<std::array<std::string, 3>> keys;
    std::vector<double> probs;
    for (const auto& atom : atoms) {
      std::string x, y, z;
      for (int s = t + 1; s < T; ++s)
        for (int a = 0; a < 2; ++a) x += std::to_string(int(atom.rewards(s, a)));
      y = std::to_string(atom.actions[t]) +
          std::to_string(int(atom.rewards(t, atom.actions[t])));
      for (int s = 0; s < t; ++s)
        z += std::to_string(atom.actions[s]) +
             std::to_string(int(atom.rewards(s, atom.actions[s])));
      keys.push_back({x, y, z});
      probs.push_back(atom.prob);
    }
    const double brute = oracles::cmi(keys, probs);
    CHECK(std::abs(viaLibrary.infoGain[t] - brute) < 1e-6);
    if (t + 1 < T) {
      CHECK(viaLibrary.infoGain[t] > 0.0);
      CHECK(std::isfinite(viaLibrary.gamma[t]));
      CHECK(viaLibrary.gamma[t] > 0.0);
    }
  }
}

TEST_CASE("theorem 2: zero-over-zero instance passes exactly") {
  const ModulatedBernoulliSpec spec = asymmetricSpec(1.0);
  const BoundReport report = thm2Check(spec, *filteredGreedy(spec), 3,
                                       OracleProcessKind::PastRewards, AlphaSpec::identity());
  CHECK(report.pass);
  CHECK_FALSE(report.trivialInfinite);
  CHECK(report.lhs == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(report.rhs == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("theorem 2: uniform policy on the fair two-action instance") {
  const ModulatedBernoulliSpec spec = fairSpec(2, 0.5);
  const BoundReport report = thm2Check(spec, *uniformPolicy(2), 3,
                                       OracleProcessKind::PastRewards, AlphaSpec::identity());
  CHECK(report.pass);
  CHECK(report.slack >= 0.0);
}

TEST_CASE("theorem 2 refuses the latent-reading oracle") {
  const ModulatedBernoulliSpec spec = fairSpec(2, 0.5);
  CHECK_THROWS_AS(thm2Check(spec, *dynamicOracle(2), 3, OracleProcessKind::DynamicTheta,
                            AlphaSpec::identity()),
                  SpecError);
}

TEST_CASE("telescoping inequality holds at every truncation level") {
  const ModulatedBernoulliSpec spec = asymmetricSpec(0.5);
  for (const auto& policy : {uniformPolicy(2), filteredGreedy(spec)}) {
    for (int W = 1; W <= 4; ++W) {
      const AlphaSpec alpha = AlphaSpec::identity(W);
      const double lhs = telescopeInfoSum(spec, *policy, 4, alpha);
      const double rhs = predictiveInfo(spec, alpha, 4).cumulative;
      CHECK(lhs <= rhs + 1e-9);
    }
  }
}

TEST_CASE("proposition 2 with the latent state") {
  // Frozen chain: rhs = H(Q) per action and the single-action case is tight.
  const BoundReport tight =
      prop2Bound(fairSpec(1, 0.0), 3, AlphaSpec::identity(), MarkovStateChoice::Theta);
  CHECK(tight.pass);
  CHECK(tight.lhs == doctest::Approx(kLn2).epsilon(1e-9));
  CHECK(tight.rhs == doctest::Approx(kLn2).epsilon(1e-9));

  const BoundReport atOne =
      prop2Bound(fairSpec(2, 1.0), 3, AlphaSpec::identity(), MarkovStateChoice::Theta);
  CHECK(atOne.pass);
  CHECK(atOne.lhs == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(atOne.rhs == doctest::Approx(0.0).epsilon(1e-9));

  const BoundReport mid =
      prop2Bound(fairSpec(1, 0.5), 3, AlphaSpec::identity(), MarkovStateChoice::Theta);
  CHECK(mid.pass);
  CHECK(mid.lhs > 0.0);
}

TEST_CASE("proposition 2 with the accumulating reward state") {
  const BoundReport report =
      prop2Bound(asymmetricSpec(0.4), 3, AlphaSpec::identity(), MarkovStateChoice::FullRewards);
  CHECK(report.pass);
}

TEST_CASE("predictive information vanishes along the q-bar sequence") {
  double previous = std::numeric_limits<double>::infinity();
  for (double qbar : {0.5, 0.9, 0.99, 1.0}) {
    const double vt = predictiveInfo(fairSpec(2, qbar), AlphaSpec::identity(), 4).cumulative;
    CHECK(vt <= previous + 1e-9);
    previous = vt;
  }
  CHECK(previous <= 1e-9);
}

TEST_CASE("theorem 1 report orientation") {
  const ModulatedBernoulliSpec spec = fairSpec(2, 0.5);
  const BayesOptimalResult opt = solveBayesOptimal(spec, 4);
  const BoundReport report = thm1Check(spec, *opt.policy, 4);
  CHECK(report.pass);
  CHECK(report.lhs == doctest::Approx(4.0 * 0.125).epsilon(1e-12));
  CHECK(report.slack >= -1e-9);
}
